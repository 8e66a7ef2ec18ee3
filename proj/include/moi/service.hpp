#pragma once

#include <memory>
#include <string>

#include "moi/index.hpp"
#include "moi/ranking.hpp"
#include "moi/retrieval.hpp"
#include "moi/text_index.hpp"

namespace moi {

// Read-only JSON query service over a loaded index pair. Endpoints:
//   GET /stats
//   GET /zipf?complexity=&shifted=
//   GET /search?q=&k=&b=&limit=&retrieved-docs=&min-hit-freq=&min-df=&max-df=
//              &min-complexity=&facets=
//   GET /complete?p=&mode=prefix|contains&symbols=&limit=
//   GET /moi/<key>
// Responses mirror the CLI's JSON byte for byte. Requests arriving before
// provide() has been called get 503.
class Service {
public:
    Service(RankingParams params, RetrievalSettings defaults);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // Binds and starts serving on a background thread. port 0 picks a free
    // port; returns the bound port or -1 on bind failure.
    int start(const std::string& host, int port);

    // Publishes the indexes; requests begin to succeed.
    void provide(CorpusIndex corpus, text::TextIndex text);

    void wait();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace moi
