#include "peerlens/judge/rubric.hpp"

#include <algorithm>
#include <map>

#include "peerlens/embedded_data.hpp"
#include "peerlens/error.hpp"

namespace peerlens::judge {

int aspect_index(std::string_view key) {
  const auto it = std::find(kAspectKeys.begin(), kAspectKeys.end(), key);
  return it == kAspectKeys.end() ? -1 : static_cast<int>(it - kAspectKeys.begin());
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::kConfigError, "rubric line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Rubric Rubric::parse(std::string_view content) {
  Rubric rubric;
  std::map<int, RubricAspect> by_index;
  std::map<int, std::array<bool, 5>> seen_levels;
  RubricAspect* current = nullptr;
  int current_index = -1;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    const std::string_view line = trim(content.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      const std::string key(trim(line.substr(1, line.size() - 2)));
      current_index = aspect_index(key);
      if (current_index < 0) fail(line_no, "unknown aspect '" + key + "'");
      if (by_index.contains(current_index)) fail(line_no, "duplicate aspect '" + key + "'");
      current = &by_index[current_index];
      current->key = key;
      seen_levels[current_index] = {};
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'name = value'");
    const std::string_view name = trim(line.substr(0, eq));
    const std::string value(trim(line.substr(eq + 1)));

    if (current == nullptr) {
      if (name != "version") fail(line_no, "unexpected '" + std::string(name) + "' before first aspect");
      rubric.version_ = value;
      continue;
    }
    if (name == "name") {
      current->name = value;
    } else if (name == "description") {
      current->description = value;
    } else if (name.size() == 1 && name[0] >= '1' && name[0] <= '5') {
      const int level = name[0] - '1';
      current->anchors[static_cast<std::size_t>(level)] = value;
      seen_levels[current_index][static_cast<std::size_t>(level)] = true;
    } else {
      fail(line_no, "unknown field '" + std::string(name) + "'");
    }
  }

  if (rubric.version_.empty()) throw Error(ErrorCode::kConfigError, "rubric has no version");
  if (by_index.size() != kAspectCount) {
    throw Error(ErrorCode::kConfigError, "rubric defines " + std::to_string(by_index.size()) + " of " +
                                             std::to_string(kAspectCount) + " aspects");
  }
  for (auto& [index, aspect] : by_index) {
    if (aspect.description.empty()) throw Error(ErrorCode::kConfigError, aspect.key + " has no description");
    const auto& levels = seen_levels[index];
    if (!std::all_of(levels.begin(), levels.end(), [](bool b) { return b; })) {
      throw Error(ErrorCode::kConfigError, aspect.key + " lacks an anchor for some level 1..5");
    }
    if (aspect.name.empty()) aspect.name = aspect.key;
    rubric.aspects_.push_back(std::move(aspect));
  }
  return rubric;
}

const Rubric& Rubric::bundled() {
  static const Rubric rubric = [] {
    const auto content = embedded::find("rubric/rubric-v1.txt");
    if (!content) throw Error(ErrorCode::kConfigError, "bundled rubric missing");
    return parse(*content);
  }();
  return rubric;
}

}  // namespace peerlens::judge
