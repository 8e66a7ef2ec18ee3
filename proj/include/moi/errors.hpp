#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace moi {

// Malformed XML input. `offset` is the byte position of the failure.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, size_t offset)
        : std::runtime_error(msg + " at byte " + std::to_string(offset)), offset_(offset) {}

    size_t offset() const { return offset_; }

private:
    size_t offset_;
};

// A <math> element with no content.
class EmptyExpressionError : public std::runtime_error {
public:
    EmptyExpressionError() : std::runtime_error("empty <math> expression") {}
};

// A serialized key violating the grammar. `position` is the character index.
class DecodeError : public std::runtime_error {
public:
    DecodeError(const std::string& msg, size_t position)
        : std::runtime_error(msg + " at position " + std::to_string(position)),
          position_(position) {}

    size_t position() const { return position_; }

private:
    size_t position_;
};

enum class IoErrorKind {
    open_failed,
    read_failed,
    write_failed,
    bad_magic,
    version_mismatch,
    checksum_mismatch,
    truncated,
};

class IoError : public std::runtime_error {
public:
    IoError(IoErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    IoErrorKind kind() const { return kind_; }

private:
    IoErrorKind kind_;
};

// Query analyzed to zero tokens (empty or all stop words).
class EmptyQueryError : public std::runtime_error {
public:
    EmptyQueryError() : std::runtime_error("query contains no searchable tokens") {}
};

// Autocomplete pattern that cannot be parsed.
class PatternError : public std::runtime_error {
public:
    explicit PatternError(const std::string& msg) : std::runtime_error(msg) {}
};

// A term was scored against a document set that does not contain it.
class AbsentTermError : public std::runtime_error {
public:
    explicit AbsentTermError(const std::string& key)
        : std::runtime_error("term not present in any evaluated document: " + key) {}
};

class DuplicateDocumentError : public std::runtime_error {
public:
    explicit DuplicateDocumentError(const std::string& doc_id)
        : std::runtime_error("duplicate document id: " + doc_id) {}
};

}  // namespace moi
