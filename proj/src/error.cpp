#include "sketchsearch/error.hpp"

namespace sketchsearch {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput: return "invalid_input";
        case ErrorCode::InvalidState: return "invalid_state";
        case ErrorCode::EmptyQuery: return "empty_query";
        case ErrorCode::ModelFormat: return "model_format";
        case ErrorCode::IndexFormat: return "index_format";
        case ErrorCode::VersionMismatch: return "version_mismatch";
        case ErrorCode::Io: return "io_error";
        case ErrorCode::EmptyCorpus: return "empty_corpus";
    }
    return "unknown";
}

}  // namespace sketchsearch
