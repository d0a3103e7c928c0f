#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "posetnet/error.hpp"
#include "posetnet/graded_algebra.hpp"
#include "posetnet/homotopy.hpp"
#include "posetnet/net_algebras.hpp"
#include "posetnet/net_hilbert.hpp"
#include "posetnet/poset.hpp"
#include "posetnet/report.hpp"

namespace posetnet {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::input_error, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json parse_json(const std::string& text, const std::string& what) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(ErrorCode::input_error, "malformed JSON in " + what);
  return j;
}

/// FNV-1a digest of file contents, for report provenance.
inline std::string file_digest(const std::string& path) {
  std::string text = read_file(path);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string dir_of(const std::string& path) {
  auto pos = path.find_last_of('/');
  return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

// ---------------------------------------------------------------------------
// Poset format: {"elements": [...], "leq": [["a","b"], ...]}
// ---------------------------------------------------------------------------

inline Poset poset_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("elements") || !j["elements"].is_array())
    fail(ErrorCode::input_error, "poset JSON needs an 'elements' array");
  std::vector<std::string> elements;
  for (const auto& e : j["elements"]) elements.push_back(e.get<std::string>());
  std::vector<std::pair<std::string, std::string>> pairs;
  if (j.contains("leq")) {
    for (const auto& pr : j["leq"]) {
      if (!pr.is_array() || pr.size() != 2)
        fail(ErrorCode::input_error, "poset 'leq' entries are two-element arrays");
      pairs.emplace_back(pr[0].get<std::string>(), pr[1].get<std::string>());
    }
  }
  return build_poset(std::move(elements), pairs);
}

inline Json poset_to_json(const Poset& p) {
  Json j;
  j["elements"] = p.labels();
  Json leq = Json::array();
  for (int a = 0; a < p.size(); ++a)
    for (int b = 0; b < p.size(); ++b)
      if (a != b && p.leq(a, b)) leq.push_back({p.label(a), p.label(b)});
  j["leq"] = std::move(leq);
  return j;
}

inline Poset load_poset(const std::string& path) {
  return poset_from_json(parse_json(read_file(path), path));
}

// ---------------------------------------------------------------------------
// Net format:
// {"poset": "file.json" | {...}, "dims": {"a1": 2, ...},
//  "gamma": {"a1<=b1": [0,1], ...}, "L": 4}
// ---------------------------------------------------------------------------

inline TruncatedNet net_from_json(const Json& j, const std::string& base_dir = ".") {
  if (!j.is_object() || !j.contains("poset") || !j.contains("dims") || !j.contains("L"))
    fail(ErrorCode::input_error, "net JSON needs 'poset', 'dims' and 'L'");
  Poset poset = j["poset"].is_string()
                    ? load_poset(base_dir + "/" + j["poset"].get<std::string>())
                    : poset_from_json(j["poset"]);
  std::map<std::string, int> dims;
  for (auto it = j["dims"].begin(); it != j["dims"].end(); ++it)
    dims[it.key()] = it.value().get<int>();
  TruncatedNet::GammaSpec gamma;
  if (j.contains("gamma")) {
    for (auto it = j["gamma"].begin(); it != j["gamma"].end(); ++it) {
      const std::string& key = it.key();
      auto sep = key.find("<=");
      if (sep == std::string::npos)
        fail(ErrorCode::input_error, "gamma keys look like 'a<=b', got '" + key + "'");
      std::vector<int> image;
      for (const auto& v : it.value()) image.push_back(v.get<int>());
      gamma[{key.substr(0, sep), key.substr(sep + 2)}] = std::move(image);
    }
  }
  return TruncatedNet(std::move(poset), dims, gamma, j["L"].get<int>());
}

inline TruncatedNet load_net(const std::string& path) {
  return net_from_json(parse_json(read_file(path), path), dir_of(path));
}

inline Json net_to_json(const TruncatedNet& net) {
  Json j;
  j["poset"] = poset_to_json(net.poset());
  Json dims = Json::object();
  for (int a = 0; a < net.poset().size(); ++a) dims[net.poset().label(a)] = net.dim(a);
  j["dims"] = std::move(dims);
  Json gamma = Json::object();
  for (auto [a, b] : net.strict_pairs())
    gamma[net.poset().label(a) + "<=" + net.poset().label(b)] = net.gamma(a, b).img;
  j["gamma"] = std::move(gamma);
  j["L"] = net.L();
  return j;
}

// ---------------------------------------------------------------------------
// Morphism format: {"phi": {"a1": "x1", ...}, "Phi": {"a1": [0,1], ...}}
// ---------------------------------------------------------------------------

inline NetMorphism morphism_from_json(const TruncatedNet& src, const TruncatedNet& dst,
                                      const Json& j) {
  if (!j.is_object() || !j.contains("phi"))
    fail(ErrorCode::input_error, "morphism JSON needs a 'phi' object");
  std::map<std::string, std::string> phi;
  for (auto it = j["phi"].begin(); it != j["phi"].end(); ++it)
    phi[it.key()] = it.value().get<std::string>();
  std::map<std::string, std::vector<int>> Phi;
  if (j.contains("Phi")) {
    for (auto it = j["Phi"].begin(); it != j["Phi"].end(); ++it) {
      std::vector<int> image;
      for (const auto& v : it.value()) image.push_back(v.get<int>());
      Phi[it.key()] = std::move(image);
    }
  }
  return make_morphism(src, dst, phi, Phi);
}

inline NetMorphism load_morphism(const TruncatedNet& src, const TruncatedNet& dst,
                                 const std::string& path) {
  return morphism_from_json(src, dst, parse_json(read_file(path), path));
}

// ---------------------------------------------------------------------------
// Graded element format:
// {"base": "a1", "parts": {"<degree text>": [{"word": "<path text>",
//  "coeff": "3/2", "restrict": [0,1]}, ...], ...}}
// ---------------------------------------------------------------------------

inline GradedElement element_from_json(const TruncatedNet& net, const Json& j) {
  if (!j.is_object() || !j.contains("base"))
    fail(ErrorCode::input_error, "element JSON needs 'base'");
  int base = net.poset().id_of(j["base"].get<std::string>());
  GradedElement x(base);
  if (!j.contains("parts")) return x;
  for (auto it = j["parts"].begin(); it != j["parts"].end(); ++it) {
    PathClass degree = make_class(net.ctx(), parse_path(net.poset(), it.key()));
    for (const auto& term : it.value()) {
      if (!term.contains("word")) fail(ErrorCode::input_error, "term needs a 'word'");
      ChiTerm t = chi_seq(net, parse_path(net.poset(), term["word"].get<std::string>()));
      if (!(t.word == degree))
        fail(ErrorCode::input_error,
             "term word '" + term["word"].get<std::string>() + "' is not in degree '" + it.key() + "'");
      if (term.contains("restrict")) {
        std::set<int> keep;
        for (const auto& v : term["restrict"]) keep.insert(v.get<int>());
        t.hmap = t.hmap.restricted(keep);
      }
      Rat coeff = term.contains("coeff") ? parse_rational(term["coeff"].get<std::string>()) : Rat(1);
      if (!t.hmap.empty()) x.add(t, coeff);
    }
  }
  return x;
}

inline GradedElement load_element(const TruncatedNet& net, const std::string& path) {
  return element_from_json(net, parse_json(read_file(path), path));
}

inline Json element_to_json(const TruncatedNet& net, const GradedElement& x) {
  Json j;
  j["base"] = net.poset().label(x.base());
  Json parts = Json::object();
  for (const auto& [deg, sum] : x.parts()) {
    Json terms = Json::array();
    for (const auto& [t, c] : sum.terms()) {
      Json term;
      term["word"] = print_path(net.poset(), t.word.repr);
      term["coeff"] = to_string(c);
      term["restrict"] = t.hmap.domain();
      terms.push_back(std::move(term));
    }
    parts[print_path(net.poset(), deg.repr)] = std::move(terms);
  }
  j["parts"] = std::move(parts);
  return j;
}

// ---------------------------------------------------------------------------
// Run reports
// ---------------------------------------------------------------------------

struct RunReport {
  std::string command;
  std::map<std::string, std::string> inputs;  // path -> digest
  Report report;
  Json payload;  // command-specific result object
  long elapsed_ms = 0;

  bool ok() const { return report.failures() == 0; }
};

inline Json report_to_json(const Report& rep) {
  Json out = Json::array();
  for (const auto& a : rep.assertions) {
    Json e;
    e["name"] = a.name;
    e["status"] = a.status == Assertion::Status::pass   ? "pass"
                  : a.status == Assertion::Status::fail ? "fail"
                                                        : "skipped";
    if (!a.witness.empty()) e["witness"] = a.witness;
    out.push_back(std::move(e));
  }
  return out;
}

inline Json run_report_to_json(const RunReport& r) {
  Json j;
  j["command"] = r.command;
  j["inputs"] = r.inputs;
  j["assertions"] = report_to_json(r.report);
  if (!r.payload.is_null()) j["result"] = r.payload;
  j["elapsed_ms"] = r.elapsed_ms;
  j["ok"] = r.ok();
  return j;
}

}  // namespace posetnet
