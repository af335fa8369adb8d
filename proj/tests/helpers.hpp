#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dialcomp/core.hpp"
#include "nlohmann/json.hpp"

namespace testutil {

// Scratch directory under the test working directory; recreated fresh.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::current_path() / ("tmp_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

// Interchange record builder.
struct RecordBuilder {
  nlohmann::ordered_json j;

  explicit RecordBuilder(const std::string& dialogue_id) {
    j["dialogue_id"] = dialogue_id;
    j["turns"] = nlohmann::ordered_json::array();
  }
  RecordBuilder& turn(const std::string& speaker, const std::string& text) {
    j["turns"].push_back({{"speaker", speaker}, {"text", text}});
    return *this;
  }
  RecordBuilder& field(const std::string& label, const std::string& value) {
    j["fields"][label] = value;
    return *this;
  }
  RecordBuilder& options(const std::vector<std::string>& opts) {
    j["class_options"] = opts;
    return *this;
  }
  RecordBuilder& gold(const std::string& g) {
    j["gold"] = g;
    return *this;
  }
  RecordBuilder& target(const std::string& t) {
    j["target_response"] = t;
    return *this;
  }
  std::string str() const { return j.dump(); }
};

inline void write_jsonl(const std::filesystem::path& path,
                        const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  for (const std::string& l : lines) out << l << '\n';
}

inline dialcomp::Dialogue make_dialogue(
    const std::string& id, const std::vector<std::string>& turn_texts,
    const std::string& dataset = "test") {
  dialcomp::Dialogue d;
  d.dialogue_id = id;
  d.source_dataset = dataset;
  for (size_t i = 0; i < turn_texts.size(); ++i)
    d.turns.push_back({i % 2 == 0 ? "a" : "b", turn_texts[i]});
  return d;
}

}  // namespace testutil
