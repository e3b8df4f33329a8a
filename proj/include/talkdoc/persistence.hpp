#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "talkdoc/doc_model.hpp"

namespace talkdoc {

/// Raised when a persisted document does not follow the version 1 layout.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kDocumentFormatVersion = 1;

nlohmann::json document_to_json(const Document& document);
Document document_from_json(const nlohmann::json& j);

/// Canonical serialized form, two-space indented with a trailing newline.
std::string save_document(const Document& document);
Document load_document(const std::string& text);

}  // namespace talkdoc
