#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snc/ortho_pair.hpp"

namespace snc::cli {

// Where the (eta1, eta2) pair of a command comes from. Exactly one of
// `file`, `named`, `t` is set. Indices are one-based as typed on the command line.
struct PairRequest {
  std::optional<std::string> file;
  std::optional<std::string> named;  // e | xi | xi_bar
  std::optional<double> t;
  std::vector<int> indices;
};

// {"n": int, "eta1": [...], "eta2": [...], "mode": "sphere"|"diagonal"}.
// Throws ValidationError naming the violated invariant.
OrthoPair parse_pair_json(const std::string& text);
OrthoPair load_pair_file(const std::string& path);

// Named pairs: e = (e_i, e_j); xi = (e_i +- e_j)/sqrt2 in sphere mode and
// (e_i-e_j+e_k-e_l)/2, (e_i-e_j-e_k+e_l)/2 in diagonal mode; xi_bar =
// (e_i-e_j)/sqrt2, (e_k-e_l)/sqrt2. Defaults are coordinates 1,2 (,3,4).
OrthoPair named_pair(const std::string& name, int n, PairMode mode, const std::vector<int>& indices);

OrthoPair resolve_pair(const PairRequest& request, int n, PairMode mode);

}  // namespace snc::cli
