// SPDX-License-Identifier: Apache-2.0
#include "eventqa/text_util.hpp"
#include "eventqa/error.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace eventqa {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidEventId: return "InvalidEventId";
    case ErrorCode::DuplicateEventId: return "DuplicateEventId";
    case ErrorCode::DanglingEdge: return "DanglingEdge";
    case ErrorCode::NodeNotFound: return "NodeNotFound";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::MissingBlock: return "MissingBlock";
    case ErrorCode::MalformedObject: return "MalformedObject";
    case ErrorCode::UnknownRelationKind: return "UnknownRelationKind";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownTraversal: return "UnknownTraversal";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::MissingSlot: return "MissingSlot";
    case ErrorCode::UnknownPlaceholder: return "UnknownPlaceholder";
    case ErrorCode::UnmatchedInvocation: return "UnmatchedInvocation";
    case ErrorCode::UninterpretableYesNo: return "UninterpretableYesNo";
    case ErrorCode::TransportError: return "TransportError";
    case ErrorCode::NonSuccessStatus: return "NonSuccessStatus";
    case ErrorCode::MalformedResponseBody: return "MalformedResponseBody";
    case ErrorCode::OracleFailure: return "OracleFailure";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::DensifyFailed: return "DensifyFailed";
    case ErrorCode::RecordInvalid: return "RecordInvalid";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::IdMismatch: return "IdMismatch";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

std::string trim(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
           return std::tolower(x) == std::tolower(y);
         });
}

bool icontains(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return true;
  auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(),
                        [](unsigned char x, unsigned char y) {
                          return std::tolower(x) == std::tolower(y);
                        });
  return it != haystack.end();
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string short_hash(std::string_view data) { return sha256_hex(data).substr(0, 16); }

std::string truncate_utf8(std::string_view s, std::size_t max_bytes) {
  if (s.size() <= max_bytes) return std::string(s);
  std::size_t cut = max_bytes;
  while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) --cut;
  return std::string(s.substr(0, cut));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + tmp.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot replace " + path + ": " + ec.message());
}

}  // namespace eventqa
