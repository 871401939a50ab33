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

#include "fairbench/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fairbench/errors.hpp"
#include "fairbench/models/detail.hpp"
#include "fairbench/text.hpp"

namespace fairbench {

const char* family_name(ModelFamily f) {
  switch (f) {
    case ModelFamily::popularity: return "popularity";
    case ModelFamily::avg_rating: return "avg_rating";
    case ModelFamily::user_knn: return "user_knn";
    case ModelFamily::item_knn: return "item_knn";
    case ModelFamily::mf_sgd: return "mf_sgd";
    case ModelFamily::als: return "als";
    case ModelFamily::slim_u: return "slim_u";
  }
  return "?";
}

ModelFamily family_from_name(const std::string& name) {
  for (ModelFamily f :
       {ModelFamily::popularity, ModelFamily::avg_rating, ModelFamily::user_knn,
        ModelFamily::item_knn, ModelFamily::mf_sgd, ModelFamily::als,
        ModelFamily::slim_u}) {
    if (name == family_name(f)) return f;
  }
  throw ConfigError("unknown model family: " + name);
}

double ModelSpec::get(const std::string& name, double fallback) const {
  auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

double ModelSpec::require(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end()) {
    throw ConfigError(std::string(family_name(family)) +
                      " requires hyperparameter " + name);
  }
  return it->second;
}

std::string ModelSpec::sget(const std::string& name,
                            const std::string& fallback) const {
  auto it = sparams.find(name);
  return it == sparams.end() ? fallback : it->second;
}

void ModelSpec::validate() const {
  auto positive = [&](const std::string& name) {
    if (get(name, 1.0) <= 0.0)
      throw ConfigError(std::string(family_name(family)) + ": " + name +
                        " must be positive");
  };
  switch (family) {
    case ModelFamily::popularity:
    case ModelFamily::avg_rating:
      positive("damping");
      break;
    case ModelFamily::user_knn:
    case ModelFamily::item_knn: {
      if (get("neighbors", 1.0) < 1.0)
        throw ConfigError("knn: neighbors must be >= 1");
      if (get("shrinkage", 0.0) < 0.0)
        throw ConfigError("knn: shrinkage must be >= 0");
      const std::string sim = sget("similarity", "cosine");
      if (sim != "cosine" && sim != "pearson")
        throw ConfigError("knn: unknown similarity " + sim);
      break;
    }
    case ModelFamily::mf_sgd: {
      if (get("k", 1.0) < 1.0) throw ConfigError("mf_sgd: k must be >= 1");
      positive("lr");
      positive("reg");
      if (get("epochs", 1.0) < 1.0)
        throw ConfigError("mf_sgd: epochs must be >= 1");
      const std::string variant = sget("variant", "biased");
      if (variant != "funk" && variant != "biased" && variant != "pmf")
        throw ConfigError("mf_sgd: unknown variant " + variant);
      break;
    }
    case ModelFamily::als:
      if (get("k", 1.0) < 1.0) throw ConfigError("als: k must be >= 1");
      positive("reg");
      if (get("epochs", 1.0) < 1.0)
        throw ConfigError("als: epochs must be >= 1");
      break;
    case ModelFamily::slim_u:
      if (get("l1", 0.0) < 0.0 || get("l2", 0.0) < 0.0)
        throw ConfigError("slim_u: penalties must be >= 0");
      break;
  }
}

std::string ModelSpec::canonical() const {
  std::ostringstream out;
  out << family_name(family);
  for (const auto& [key, value] : params)
    out << ' ' << key << '=' << format_double(value);
  for (const auto& [key, value] : sparams) out << ' ' << key << '=' << value;
  out << " seed=" << seed;
  return out.str();
}

int FittedModel::user_index(const std::string& id) const {
  auto it = user_index_.find(id);
  return it == user_index_.end() ? -1 : it->second;
}

int FittedModel::item_index(const std::string& id) const {
  auto it = item_index_.find(id);
  return it == item_index_.end() ? -1 : it->second;
}

double FittedModel::predict_id(const std::string& user,
                               const std::string& item) const {
  return predict(user_index(user), item_index(item));
}

void FittedModel::init_base(const ModelSpec& spec,
                            const InteractionSet& train) {
  if (train.empty()) throw DataError("cannot fit a model on an empty set");
  spec_ = spec;
  users_ = train.users();
  items_ = train.items();
  for (int u = 0; u < (int)users_.size(); ++u) user_index_[users_[u]] = u;
  for (int i = 0; i < (int)items_.size(); ++i) item_index_[items_[i]] = i;
  double total = 0.0;
  for (const auto& r : train.rows()) total += r.rating;
  global_mean_ = total / (double)train.size();
  train_reference_ = "n" + std::to_string(train.size()) + "u" +
                     std::to_string(train.n_users()) + "i" +
                     std::to_string(train.n_items());
}

void FittedModel::init_base(const detail::BaseFields& fields) {
  spec_ = fields.spec;
  users_ = fields.users;
  items_ = fields.items;
  for (int u = 0; u < (int)users_.size(); ++u) user_index_[users_[u]] = u;
  for (int i = 0; i < (int)items_.size(); ++i) item_index_[items_[i]] = i;
  global_mean_ = fields.global_mean;
  train_reference_ = fields.train_ref;
}

void FittedModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write checkpoint: " + path.string());
  save(out);
  if (!out) throw DataError("checkpoint write failed: " + path.string());
}

void FittedModel::save(std::ostream& out) const {
  out << "fairbench-model v1\n";
  out << "kind " << kind() << "\n";
  out << "spec " << spec_.canonical() << "\n";
  out << "train_ref " << train_reference_ << "\n";
  out << "global_mean " << format_double(global_mean_) << "\n";
  out << "users " << users_.size() << "\n";
  for (const auto& u : users_) out << u << "\n";
  out << "items " << items_.size() << "\n";
  for (const auto& i : items_) out << i << "\n";
  save_params(out);
}

namespace detail {

ModelSpec parse_spec_line(const std::string& line) {
  std::istringstream in(line);
  std::string fam;
  in >> fam;
  ModelSpec spec;
  spec.family = family_from_name(fam);
  std::string kv;
  while (in >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    if (key == "seed") {
      spec.seed = std::stoull(value);
      continue;
    }
    double num;
    if (parse_double(value, num)) {
      spec.params[key] = num;
    } else {
      spec.sparams[key] = value;
    }
  }
  return spec;
}

void write_matrix(std::ostream& out, const std::string& name,
                  const Matrix& m) {
  out << "matrix " << name << ' ' << m.rows << ' ' << m.cols << "\n";
  for (int r = 0; r < m.rows; ++r) {
    const double* row = m.row(r);
    for (int c = 0; c < m.cols; ++c) {
      if (c) out << ' ';
      out << format_double(row[c]);
    }
    out << "\n";
  }
}

Matrix read_matrix(std::istream& in, const std::string& expect_name) {
  std::string tag, name;
  int rows, cols;
  in >> tag >> name >> rows >> cols;
  if (tag != "matrix" || name != expect_name || !in)
    throw DataError("checkpoint: expected matrix " + expect_name);
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) in >> m.at(r, c);
  }
  if (!in) throw DataError("checkpoint: truncated matrix " + expect_name);
  return m;
}

void write_vector(std::ostream& out, const std::string& name,
                  const std::vector<double>& v) {
  out << "vector " << name << ' ' << v.size() << "\n";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ' ';
    out << format_double(v[i]);
  }
  out << "\n";
}

std::vector<double> read_vector(std::istream& in,
                                const std::string& expect_name) {
  std::string tag, name;
  std::size_t n;
  in >> tag >> name >> n;
  if (tag != "vector" || name != expect_name || !in)
    throw DataError("checkpoint: expected vector " + expect_name);
  std::vector<double> v(n);
  for (auto& x : v) in >> x;
  if (!in) throw DataError("checkpoint: truncated vector " + expect_name);
  return v;
}

}  // namespace detail

std::unique_ptr<FittedModel> load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint: " + path.string());
  return load_model(in);
}

std::unique_ptr<FittedModel> load_model(std::istream& in) {
  std::string line;
  std::getline(in, line);
  if (trim(line) != "fairbench-model v1")
    throw DataError("not a model checkpoint");

  detail::BaseFields base;
  std::string word;
  in >> word;  // "kind"
  std::string kind;
  in >> kind;
  in >> word;  // "spec"
  std::getline(in, line);
  base.spec = detail::parse_spec_line(line);
  in >> word >> base.train_ref;
  in >> word >> base.global_mean;
  std::size_t n;
  in >> word >> n;
  std::getline(in, line);
  base.users.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::getline(in, line);
    base.users.push_back(line);
  }
  in >> word >> n;
  std::getline(in, line);
  base.items.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::getline(in, line);
    base.items.push_back(line);
  }
  if (!in) throw DataError("truncated checkpoint");

  if (kind == "popularity") return detail::load_popularity(in, base);
  if (kind == "knn") return detail::load_knn(in, base);
  if (kind == "mf") return detail::load_mf(in, base);
  if (kind == "als") return detail::load_als(in, base);
  if (kind == "slim") return detail::load_slim(in, base);
  if (kind == "adjusted") return detail::load_adjusted(in, base);
  throw DataError("unknown checkpoint kind: " + kind);
}

void ScoreTable::add(const std::string& user, const std::string& item,
                     double score) {
  if (!std::isfinite(score))
    throw DataError("non-finite score for (" + user + "," + item + ")");
  if (!index_.emplace(std::make_pair(user, item), score).second)
    throw DataError("duplicate score entry (" + user + "," + item + ")");
  rows_.push_back({user, item, score});
}

std::optional<double> ScoreTable::get(const std::string& user,
                                      const std::string& item) const {
  auto it = index_.find(std::make_pair(user, item));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void ScoreTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write score table: " + path.string());
  for (const auto& e : rows_) {
    out << e.user << '\t' << e.item << '\t' << format_double(e.score) << '\n';
  }
}

ScoreTable ScoreTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open score table: " + path.string());
  ScoreTable table;
  std::string line;
  while (std::getline(in, line)) {
    const auto sv = trim(line);
    if (sv.empty()) continue;
    const auto f = split(sv, "\t");
    double score;
    if (f.size() != 3 || !parse_double(f[2], score))
      throw DataError("malformed score row: " + line);
    table.add(f[0], f[1], score);
  }
  return table;
}

void save_topn(const TopNLists& lists, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write top-n lists: " + path.string());
  for (const auto& [user, items] : lists) {
    for (std::size_t rank = 0; rank < items.size(); ++rank) {
      out << user << '\t' << items[rank].item << '\t' << rank + 1 << '\t'
          << format_double(items[rank].score) << '\n';
    }
    if (items.empty()) out << user << "\t-\t0\t0\n";  // keep the user visible
  }
}

TopNLists load_topn(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open top-n lists: " + path.string());
  TopNLists lists;
  std::string line;
  while (std::getline(in, line)) {
    const auto sv = trim(line);
    if (sv.empty()) continue;
    const auto f = split(sv, "\t");
    if (f.size() != 4) throw DataError("malformed top-n row: " + line);
    auto& vec = lists[f[0]];
    if (f[2] == "0") continue;  // empty-list marker
    double score;
    if (!parse_double(f[3], score))
      throw DataError("malformed top-n score: " + line);
    vec.push_back({f[1], score});
  }
  return lists;
}

ScoreTable predict_scores(
    const FittedModel& model,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  ScoreTable table;
  for (const auto& [user, item] : pairs) {
    table.add(user, item, model.predict_id(user, item));
  }
  return table;
}

ScoreTable predict_scores(const FittedModel& model,
                          const InteractionSet& set) {
  ScoreTable table;
  for (const auto& r : set.rows()) {
    table.add(r.user, r.item, model.predict_id(r.user, r.item));
  }
  return table;
}

TopNLists recommend_topn(const FittedModel& model, const InteractionSet& train,
                         int n) {
  if (n < 1) throw ConfigError("top-n size must be >= 1");
  const auto& items = model.items();
  TopNLists lists;
  std::vector<char> in_train(items.size());

  // Per-user train adjacency in model item indices.
  std::vector<std::vector<int>> user_items(model.users().size());
  for (const auto& r : train.rows()) {
    const int u = model.user_index(r.user);
    const int i = model.item_index(r.item);
    if (u >= 0 && i >= 0) user_items[u].push_back(i);
  }

  for (int u = 0; u < (int)model.users().size(); ++u) {
    lists[model.users()[u]] = {};
    std::fill(in_train.begin(), in_train.end(), 0);
    for (int i : user_items[u]) in_train[i] = 1;
    std::vector<std::pair<double, int>> scored;
    scored.reserve(items.size());
    for (int i = 0; i < (int)items.size(); ++i) {
      if (in_train[i]) continue;
      scored.emplace_back(model.predict(u, i), i);
    }
    const std::size_t take = std::min<std::size_t>(n, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + take, scored.end(),
                      [](const auto& a, const auto& b) {
                        if (a.first != b.first) return a.first > b.first;
                        return a.second < b.second;
                      });
    auto& out = lists[model.users()[u]];
    out.reserve(take);
    for (std::size_t r = 0; r < take; ++r) {
      out.push_back({items[scored[r].second], scored[r].first});
    }
  }
  return lists;
}

std::unique_ptr<FittedModel> fit_model(const InteractionSet& train,
                                       const ModelSpec& spec) {
  spec.validate();
  switch (spec.family) {
    case ModelFamily::popularity:
    case ModelFamily::avg_rating:
      return fit_popularity(train, spec);
    case ModelFamily::user_knn:
    case ModelFamily::item_knn:
      return fit_knn(train, spec);
    case ModelFamily::mf_sgd:
      return fit_mf_sgd(train, spec);
    case ModelFamily::als:
      return fit_als(train, spec);
    case ModelFamily::slim_u:
      return fit_slim_u(train, spec);
  }
  throw ConfigError("unhandled model family");
}

}  // namespace fairbench
