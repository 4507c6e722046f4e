// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

#include "pqe/molecular_problem.hpp"

namespace pqe {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("FCIDUMP: " + what);
}

double parse_real(std::string tok, int line_no) {
  std::replace_if(tok.begin(), tok.end(), [](char c) { return c == 'D' || c == 'd'; }, 'E');
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size()) fail("line " + std::to_string(line_no) + ": bad number '" + tok + "'");
  return v;
}

// Namelist values keyed by upper-cased name, e.g. NORB -> {4}, ORBSYM -> {1,1,2}.
std::map<std::string, std::vector<long>> parse_header(const std::string& text) {
  std::string t;
  t.reserve(text.size());
  for (char c : text) t += (c == ',') ? ' ' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  std::istringstream in(t);
  std::map<std::string, std::vector<long>> out;
  std::string tok, key;
  auto push_value = [&](const std::string& v) {
    if (key.empty()) fail("header value '" + v + "' without a key");
    try {
      out[key].push_back(std::stol(v));
    } catch (const std::exception&) {
      // Non-integer values (e.g. UHF=.FALSE.) are carried by keys we ignore.
      out[key];
    }
  };
  while (in >> tok) {
    if (tok == "&FCI" || tok == "&END" || tok == "/") continue;
    if (tok.rfind("&FCI", 0) == 0) tok = tok.substr(4);
    const auto eq = tok.find('=');
    if (eq == std::string::npos) {
      push_value(tok);
      continue;
    }
    key = tok.substr(0, eq);
    if (key.empty()) fail("empty header key");
    out[key];
    if (eq + 1 < tok.size()) push_value(tok.substr(eq + 1));
  }
  return out;
}

long header_int(const std::map<std::string, std::vector<long>>& h, const std::string& key,
                std::optional<long> fallback) {
  auto it = h.find(key);
  if (it == h.end() || it->second.empty()) {
    if (fallback) return *fallback;
    fail("header lacks " + key);
  }
  if (it->second.size() != 1) fail("header key " + key + " must be a single integer");
  return it->second.front();
}

}  // namespace

MolecularProblem parse_fcidump(std::istream& in) {
  std::string line, header;
  int line_no = 0;
  bool ended = false;
  while (std::getline(in, line)) {
    ++line_no;
    header += line + "\n";
    std::string up = line;
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
    const auto first = up.find_first_not_of(" \t");
    if (up.find("&END") != std::string::npos || (first != std::string::npos && up[first] == '/')) {
      ended = true;
      break;
    }
  }
  if (!ended) fail("header is not terminated by &END or /");
  std::string upper_header = header;
  std::transform(upper_header.begin(), upper_header.end(), upper_header.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (upper_header.find("&FCI") == std::string::npos) fail("header does not start with &FCI");

  const auto h = parse_header(header);
  const long norb = header_int(h, "NORB", std::nullopt);
  const long nelec = header_int(h, "NELEC", std::nullopt);
  const long ms2 = header_int(h, "MS2", 0L);
  if (norb < 1 || norb > kMaxMaskQubits / 2) fail("NORB out of range");

  MolecularProblem problem(static_cast<int>(norb), static_cast<int>(nelec), static_cast<int>(ms2), 0.0);
  if (auto it = h.find("ORBSYM"); it != h.end() && !it->second.empty()) {
    if (static_cast<long>(it->second.size()) != norb) fail("ORBSYM length differs from NORB");
    std::vector<int> sym(it->second.begin(), it->second.end());
    problem.set_orbsym(std::move(sym));
  }

  // First value seen per canonical key, for duplicate detection.
  std::map<std::tuple<int, int, int, int>, double> seen;
  auto canonical = [](int i, int j, int k, int l) {
    if (i < j) std::swap(i, j);
    if (k < l) std::swap(k, l);
    if (std::tie(i, j) < std::tie(k, l)) {
      std::swap(i, k);
      std::swap(j, l);
    }
    return std::make_tuple(i, j, k, l);
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string vtok;
    if (!(ls >> vtok)) continue;
    const double v = parse_real(vtok, line_no);
    int idx[4];
    for (int& x : idx) {
      if (!(ls >> x)) fail("line " + std::to_string(line_no) + ": expected four indices");
      if (x < 0 || x > norb) {
        fail("line " + std::to_string(line_no) + ": index " + std::to_string(x) + " exceeds NORB");
      }
    }
    std::string extra;
    if (ls >> extra) fail("line " + std::to_string(line_no) + ": trailing text '" + extra + "'");
    const auto [i, j, k, l] = idx;
    std::tuple<int, int, int, int> key;
    if (i && j && k && l) {
      key = canonical(i, j, k, l);
    } else if (i && j && !k && !l) {
      key = {std::max(i, j), std::min(i, j), 0, 0};
    } else if (!i && !j && !k && !l) {
      key = {0, 0, 0, 0};
    } else if (i && !j && !k && !l) {
      continue;  // orbital energy record, recomputed from the integrals
    } else {
      fail("line " + std::to_string(line_no) + ": unsupported index pattern");
    }
    if (auto it = seen.find(key); it != seen.end()) {
      if (std::abs(it->second - v) > 1e-12) {
        fail("line " + std::to_string(line_no) + ": conflicting duplicate entry");
      }
      continue;
    }
    seen.emplace(key, v);
    if (i && k) {
      problem.set_eri(i - 1, j - 1, k - 1, l - 1, v);
    } else if (i) {
      problem.set_h(i - 1, j - 1, v);
    } else {
      problem.set_core_energy(v);
    }
  }
  return problem;
}

MolecularProblem parse_fcidump_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_fcidump(in);
}

MolecularProblem load_fcidump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("FCIDUMP: cannot open " + path.string());
  return parse_fcidump(in);
}

}  // namespace pqe
