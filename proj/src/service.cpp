#include "moi/service.hpp"

#include <atomic>
#include <charconv>
#include <optional>
#include <thread>

#include <httplib.h>

#include "moi/distribution.hpp"
#include "moi/errors.hpp"
#include "moi/json_out.hpp"

namespace moi {

namespace {

std::optional<uint64_t> parse_u64(const std::string& s) {
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<double> parse_f64(const std::string& s) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

void reply_json(httplib::Response& res, int status, const nlohmann::ordered_json& body) {
    res.status = status;
    res.set_content(to_wire(body), "application/json");
}

class BadParam : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

uint64_t u64_param(const httplib::Request& req, const std::string& name, uint64_t fallback) {
    if (!req.has_param(name)) return fallback;
    auto v = parse_u64(req.get_param_value(name));
    if (!v) throw BadParam("parameter '" + name + "' must be a non-negative integer");
    return *v;
}

double f64_param(const httplib::Request& req, const std::string& name, double fallback) {
    if (!req.has_param(name)) return fallback;
    auto v = parse_f64(req.get_param_value(name));
    if (!v) throw BadParam("parameter '" + name + "' must be a number");
    return *v;
}

bool flag_param(const httplib::Request& req, const std::string& name) {
    if (!req.has_param(name)) return false;
    std::string v = req.get_param_value(name);
    return v.empty() || v == "1" || v == "true";
}

}  // namespace

struct Service::Impl {
    RankingParams params;
    RetrievalSettings defaults;

    httplib::Server server;
    std::thread thread;
    std::atomic<bool> ready{false};
    CorpusIndex corpus;
    text::TextIndex text;

    Impl(RankingParams p, RetrievalSettings d) : params(p), defaults(d) { route(); }

    bool check_ready(httplib::Response& res) const {
        if (ready.load(std::memory_order_acquire)) return true;
        reply_json(res, 503, error_json("index is still loading"));
        return false;
    }

    RetrievalSettings settings_from(const httplib::Request& req) const {
        RetrievalSettings s = defaults;
        s.retrieved_docs = u64_param(req, "retrieved-docs", s.retrieved_docs);
        s.min_hit_freq = u64_param(req, "min-hit-freq", s.min_hit_freq);
        s.min_df = u64_param(req, "min-df", s.min_df);
        s.max_df = u64_param(req, "max-df", s.max_df);
        s.min_complexity = static_cast<uint32_t>(u64_param(req, "min-complexity",
                                                           s.min_complexity));
        s.validate();
        return s;
    }

    RankingParams params_from(const httplib::Request& req) const {
        RankingParams p = params;
        p.k = f64_param(req, "k", p.k);
        p.b = f64_param(req, "b", p.b);
        if (p.k < 0.0 || p.b < 0.0 || p.b > 1.0) throw BadParam("k must be >= 0 and b in [0,1]");
        return p;
    }

    void route() {
        server.Get("/stats", [this](const httplib::Request&, httplib::Response& res) {
            if (!check_ready(res)) return;
            reply_json(res, 200, stats_json(corpus));
        });

        server.Get("/zipf", [this](const httplib::Request& req, httplib::Response& res) {
            if (!check_ready(res)) return;
            try {
                std::optional<uint32_t> complexity;
                if (req.has_param("complexity")) {
                    auto v = parse_u64(req.get_param_value("complexity"));
                    if (!v) throw BadParam("parameter 'complexity' must be an integer");
                    complexity = static_cast<uint32_t>(*v);
                }
                bool shifted = true;
                if (req.has_param("shifted")) shifted = flag_param(req, "shifted");
                RankTable table = rank_table(corpus, complexity);
                ZipfFit fit = fit_zipf(table, shifted);
                reply_json(res, 200, zipf_json(fit, complexity, shifted, table.entries.size()));
            } catch (const BadParam& e) {
                reply_json(res, 400, error_json(e.what()));
            } catch (const std::invalid_argument& e) {
                reply_json(res, 400, error_json(e.what()));
            }
        });

        server.Get("/search", [this](const httplib::Request& req, httplib::Response& res) {
            if (!check_ready(res)) return;
            try {
                if (!req.has_param("q")) throw BadParam("missing parameter 'q'");
                std::string q = req.get_param_value("q");
                RetrievalSettings s = settings_from(req);
                RankingParams p = params_from(req);
                size_t limit = u64_param(req, "limit", 20);
                RetrievalResult result = run_query(q, s, corpus, text, p);
                std::optional<FacetCounts> facets;
                if (flag_param(req, "facets")) facets = facet_counts(q, s, corpus, text);
                reply_json(res, 200,
                           search_json(q, result, limit, facets ? &*facets : nullptr));
            } catch (const BadParam& e) {
                reply_json(res, 400, error_json(e.what()));
            } catch (const std::invalid_argument& e) {
                reply_json(res, 400, error_json(e.what()));
            } catch (const EmptyQueryError& e) {
                reply_json(res, 400, error_json(e.what()));
            }
        });

        server.Get("/complete", [this](const httplib::Request& req, httplib::Response& res) {
            if (!check_ready(res)) return;
            try {
                if (!req.has_param("p")) throw BadParam("missing parameter 'p'");
                std::string pattern = req.get_param_value("p");
                std::string mode = req.has_param("mode") ? req.get_param_value("mode") : "prefix";
                size_t limit = u64_param(req, "limit", 10);
                std::vector<Suggestion> suggestions;
                if (mode == "prefix") {
                    suggestions = autocomplete(pattern, limit, corpus);
                } else if (mode == "contains") {
                    std::set<std::string> symbols;
                    std::string raw =
                        req.has_param("symbols") ? req.get_param_value("symbols") : "";
                    size_t start = 0;
                    while (start <= raw.size() && !raw.empty()) {
                        size_t comma = raw.find(',', start);
                        std::string sym = raw.substr(
                            start, comma == std::string::npos ? std::string::npos
                                                              : comma - start);
                        if (!sym.empty()) symbols.insert(sym);
                        if (comma == std::string::npos) break;
                        start = comma + 1;
                    }
                    suggestions = suggest_containing(pattern, symbols, limit, corpus);
                } else {
                    throw BadParam("mode must be 'prefix' or 'contains'");
                }
                reply_json(res, 200, complete_json(pattern, mode, suggestions));
            } catch (const BadParam& e) {
                reply_json(res, 400, error_json(e.what()));
            } catch (const PatternError& e) {
                reply_json(res, 400, error_json(e.what()));
            } catch (const DecodeError& e) {
                reply_json(res, 400, error_json(e.what()));
            }
        });

        server.Get(R"(/moi/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
            if (!check_ready(res)) return;
            std::string key = req.matches[1];
            auto it = corpus.records.find(key);
            if (it == corpus.records.end()) {
                reply_json(res, 404, error_json("unknown key: " + key));
                return;
            }
            reply_json(res, 200, moi_json(it->second));
        });
    }
};

Service::Service(RankingParams params, RetrievalSettings defaults)
    : impl_(std::make_unique<Impl>(params, defaults)) {}

Service::~Service() {
    stop();
}

int Service::start(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
        bound = impl_->server.bind_to_any_port(host);
        if (bound < 0) return -1;
    } else {
        if (!impl_->server.bind_to_port(host, port)) return -1;
    }
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return bound;
}

void Service::provide(CorpusIndex corpus, text::TextIndex text) {
    impl_->corpus = std::move(corpus);
    impl_->text = std::move(text);
    impl_->ready.store(true, std::memory_order_release);
}

void Service::wait() {
    if (impl_->thread.joinable()) impl_->thread.join();
}

void Service::stop() {
    if (impl_->server.is_running()) impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace moi
