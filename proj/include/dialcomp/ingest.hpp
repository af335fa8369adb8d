#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dialcomp/core.hpp"

namespace dialcomp {

enum class Split { train, validation, test };

std::string_view to_string(Split s);
std::optional<Split> split_from_string(std::string_view s);

struct CorpusDescriptor {
  std::filesystem::path path;
  std::string dataset_id;
  Split split = Split::train;
};

// One interchange line: the dialogue plus the instance payload attached to
// it. Field order follows the file.
struct InterchangeRecord {
  Dialogue dialogue;
  std::vector<std::pair<std::string, std::string>> fields;
  std::optional<std::vector<std::string>> class_options;
  std::optional<std::string> gold;
  std::optional<std::string> target_response;
};

struct RecordError {
  size_t line_no = 0;
  std::string message;
};

using RecordResult = std::variant<InterchangeRecord, RecordError>;

// Streams records one line at a time; malformed records surface in-stream
// as RecordError, never silently dropped. Construction throws if the file
// cannot be opened. Single consumer; constant memory in corpus size.
class CorpusStream {
 public:
  explicit CorpusStream(const CorpusDescriptor& descriptor);

  std::optional<RecordResult> next();

  const CorpusDescriptor& descriptor() const { return descriptor_; }

 private:
  CorpusDescriptor descriptor_;
  std::ifstream in_;
  size_t line_no_ = 0;
};

struct CountResult {
  size_t records = 0;
  std::vector<RecordError> errors;
};

// Number of well-formed records, with per-record errors reported.
CountResult count_instances(const CorpusDescriptor& descriptor);

// Parses a single interchange line (exposed for tests and tools).
RecordResult parse_interchange_line(const std::string& line, size_t line_no,
                                    const std::string& dataset_id);

}  // namespace dialcomp
