// Copyright 2026 The fairbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairbench/data_io.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "fairbench/errors.hpp"
#include "fairbench/text.hpp"

namespace fairbench {

namespace {

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path.string());
  return in;
}

const std::string& field_at(const std::vector<std::string>& fields, int col,
                            const std::filesystem::path& path,
                            std::size_t line_no) {
  if (col < 0 || col >= (int)fields.size()) {
    throw DataError("malformed row at " + path.string() + ":" +
                    std::to_string(line_no) + " (missing column " +
                    std::to_string(col) + ")");
  }
  return fields[col];
}

}  // namespace

ColumnLayout ml1m_ratings_layout() { return {"::", 0, 1, 2, 3}; }
ColumnLayout canonical_layout() { return {"\t", 0, 1, 2, 3}; }
ColumnLayout lfm_events_layout() { return {"\t", 0, 2, -1, 1}; }

AttributeLayout ml1m_users_layout() {
  return {"::", 0, {{"gender", 1}, {"age", 2}, {"occupation", 3}}};
}

AttributeLayout lfm_users_layout() {
  return {"\t", 0, {{"gender", 1}, {"age", 2}, {"country", 3}}};
}

InteractionSet load_interactions(const std::filesystem::path& path,
                                 const ColumnLayout& layout,
                                 RatingScale scale) {
  std::ifstream in = open_or_throw(path);
  std::vector<Interaction> rows;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = trim(line);
    if (sv.empty()) continue;
    const auto fields = split(sv, layout.delimiter);
    Interaction r;
    r.user = field_at(fields, layout.user_col, path, line_no);
    r.item = field_at(fields, layout.item_col, path, line_no);
    if (!parse_double(field_at(fields, layout.rating_col, path, line_no),
                      r.rating)) {
      throw DataError("malformed rating at " + path.string() + ":" +
                      std::to_string(line_no));
    }
    if (r.rating < scale.lo || r.rating > scale.hi) {
      throw DataError("rating outside scale [" + format_double(scale.lo) +
                      "," + format_double(scale.hi) + "] at " + path.string() +
                      ":" + std::to_string(line_no));
    }
    if (layout.timestamp_col >= 0 &&
        layout.timestamp_col < (int)fields.size()) {
      const std::string& f = fields[layout.timestamp_col];
      if (!f.empty() && f != "-") {
        std::int64_t ts;
        if (!parse_int64(f, ts)) {
          throw DataError("malformed timestamp at " + path.string() + ":" +
                          std::to_string(line_no));
        }
        r.timestamp = ts;
      }
    }
    if (!seen.insert(r.user + "\x1f" + r.item).second) {
      throw DataError("duplicate (user,item) pair at " + path.string() + ":" +
                      std::to_string(line_no) + " (" + r.user + "," + r.item +
                      ")");
    }
    rows.push_back(std::move(r));
  }
  return InteractionSet(std::move(rows), scale);
}

AttributeTable load_attributes(const std::filesystem::path& path,
                               const AttributeLayout& layout) {
  std::ifstream in = open_or_throw(path);
  std::vector<std::string> schema;
  schema.reserve(layout.attributes.size());
  for (const auto& a : layout.attributes) schema.push_back(a.name);
  AttributeTable table(schema);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = trim(line);
    if (sv.empty()) continue;
    const auto fields = split(sv, layout.delimiter);
    const std::string& user = field_at(fields, layout.user_col, path, line_no);
    for (const auto& a : layout.attributes) {
      if (a.col >= 0 && a.col < (int)fields.size() && !fields[a.col].empty()) {
        table.set(user, a.name, fields[a.col]);
      }
    }
  }
  return table;
}

void save_canonical(const InteractionSet& set,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  for (const auto& r : set.rows()) {
    out << r.user << '\t' << r.item << '\t' << format_double(r.rating) << '\t'
        << (r.timestamp ? std::to_string(*r.timestamp) : std::string("-"))
        << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

InteractionSet load_canonical(const std::filesystem::path& path,
                              RatingScale scale) {
  return load_interactions(path, canonical_layout(), scale);
}

std::vector<PlayEvent> load_play_events(const std::filesystem::path& path,
                                        const std::string& delimiter,
                                        int user_col, int artist_col,
                                        int plays_col) {
  std::ifstream in = open_or_throw(path);
  std::vector<PlayEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = trim(line);
    if (sv.empty()) continue;
    const auto fields = split(sv, delimiter);
    PlayEvent e;
    e.user = field_at(fields, user_col, path, line_no);
    e.artist = field_at(fields, artist_col, path, line_no);
    if (plays_col >= 0) {
      if (!parse_double(field_at(fields, plays_col, path, line_no), e.plays) ||
          e.plays < 1.0) {
        throw DataError("malformed play count at " + path.string() + ":" +
                        std::to_string(line_no));
      }
    }
    events.push_back(std::move(e));
  }
  return events;
}

}  // namespace fairbench
