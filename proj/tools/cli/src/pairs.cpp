#include "snc_cli/pairs.hpp"

#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "snc/errors.hpp"

namespace snc::cli {
namespace {

std::vector<int> zero_based(const std::vector<int>& one_based, std::vector<int> defaults, int n) {
  std::vector<int> idx = one_based.empty() ? std::move(defaults) : one_based;
  std::set<int> seen;
  for (int& i : idx) {
    if (!one_based.empty()) --i;
    if (i < 0 || i >= n) throw ValidationError("pair index out of range 1.." + std::to_string(n));
    if (!seen.insert(i).second) throw ValidationError("pair indices must be distinct");
  }
  return idx;
}

// Moves coordinates 0..k-1 of `pair` to positions `targets`.
OrthoPair place(const OrthoPair& pair, const std::vector<int>& targets) {
  const int n = pair.n();
  std::vector<int> perm(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (std::size_t k = 0; k < targets.size(); ++k) {
    perm[static_cast<std::size_t>(targets[k])] = static_cast<int>(k);
    used[k] = true;
  }
  int next = 0;
  for (int& v : perm) {
    if (v >= 0) continue;
    while (used[static_cast<std::size_t>(next)]) ++next;
    v = next;
    used[static_cast<std::size_t>(next)] = true;
  }
  return pair.permuted(perm);
}

}  // namespace

OrthoPair parse_pair_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("pair file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("pair file must hold a JSON object");
  for (const char* key : {"n", "eta1", "eta2", "mode"}) {
    if (!doc.contains(key)) throw ValidationError(std::string("pair file is missing \"") + key + "\"");
  }
  std::vector<double> eta1, eta2;
  int n = 0;
  PairMode mode;
  try {
    n = doc.at("n").get<int>();
    eta1 = doc.at("eta1").get<std::vector<double>>();
    eta2 = doc.at("eta2").get<std::vector<double>>();
    mode = parse_pair_mode(doc.at("mode").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("pair file has a field of the wrong type: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  if (static_cast<int>(eta1.size()) != n || static_cast<int>(eta2.size()) != n) {
    throw ValidationError("pair file: eta1 and eta2 must both have length n = " + std::to_string(n));
  }
  return OrthoPair(std::move(eta1), std::move(eta2), mode);
}

OrthoPair load_pair_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open pair file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_pair_json(buf.str());
}

OrthoPair named_pair(const std::string& name, int n, PairMode mode, const std::vector<int>& indices) {
  if (name == "e") {
    if (mode == PairMode::diagonal) {
      throw ValidationError("pair e is not orthogonal to the diagonal (sum of entries must be 0)");
    }
    const auto idx = zero_based(indices, {0, 1}, n);
    if (idx.size() != 2) throw ValidationError("pair e takes 2 indices");
    return OrthoPair::canonical(n, idx[0], idx[1]);
  }
  if (name == "xi" && mode == PairMode::sphere) {
    const auto idx = zero_based(indices, {0, 1}, n);
    if (idx.size() != 2) throw ValidationError("sphere pair xi takes 2 indices");
    return OrthoPair::rotated(n, idx[0], idx[1]);
  }
  if (name == "xi" || name == "xi_bar") {
    if (n < 4) throw ValidationError("pair " + name + " needs n >= 4");
    const auto idx = zero_based(indices, {0, 1, 2, 3}, n);
    if (idx.size() != 4) throw ValidationError("pair " + name + " takes 4 indices");
    const OrthoPair base = name == "xi" ? OrthoPair::diagonal_xi(n) : OrthoPair::diagonal_xi_bar(n);
    const OrthoPair placed = place(base, idx);
    return OrthoPair(placed.eta1(), placed.eta2(), mode);
  }
  throw ValidationError("unknown pair '" + name + "' (expected e, xi or xi_bar)");
}

OrthoPair resolve_pair(const PairRequest& request, int n, PairMode mode) {
  const int sources = (request.file ? 1 : 0) + (request.named ? 1 : 0) + (request.t ? 1 : 0);
  if (sources != 1) throw PreconditionError("give exactly one of --pair-file, --pair, --t");
  if (request.file) {
    OrthoPair pair = load_pair_file(*request.file);
    if (pair.mode() != mode) {
      throw ValidationError("pair file mode '" + to_string(pair.mode()) + "' differs from --mode '" +
                            to_string(mode) + "'");
    }
    return pair;
  }
  if (request.named) return named_pair(*request.named, n, mode, request.indices);
  const double t = *request.t;
  try {
    return mode == PairMode::sphere ? OrthoPair::sphere_with_overlap(n, t) : OrthoPair::diagonal_with_overlap(n, t);
  } catch (const std::out_of_range& e) {
    throw ValidationError(e.what());
  }
}

}  // namespace snc::cli
