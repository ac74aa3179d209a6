// Acceptance runner. Prints one PASS/FAIL line per criterion with its runtime
// limit and exits nonzero if any criterion fails. Criteria 1, 2 and 9 are pure
// arithmetic laws with no file form and run in-process; the rest go through
// run_command with instance and coloring files in a scratch directory.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "hindreg/hindreg.hpp"

using namespace hindreg;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& why) {
    if (!cond && ok) {
      ok = false;
      detail = why;
    }
  }
};

class Scratch {
 public:
  Scratch() : root_(fs::temp_directory_path() / ("hindreg_acceptance_" + std::to_string(::getpid()))) {
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  ~Scratch() { fs::remove_all(root_); }
  std::string write(const std::string& name, const json& j) const {
    const auto p = (root_ / name).string();
    write_text(p, canonical_dump(j));
    return p;
  }
  std::string path(const std::string& name) const { return (root_ / name).string(); }

 private:
  fs::path root_;
};

CommandResult cli(std::vector<std::string> args) {
  args.push_back("--no-timing");
  return run_command(args);
}

// Independent bit oracles: plain shifts and loops, no library helpers.
unsigned low_bit(Natural n) {
  unsigned e = 0;
  while (((n >> e) & 1u) == 0) ++e;
  return e;
}
unsigned high_bit(Natural n) {
  unsigned e = 63;
  while (((n >> e) & 1u) == 0) --e;
  return e;
}
bool oracle_apart(const std::vector<Natural>& s) {
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (!(s[i] < s[i + 1]) || high_bit(s[i]) >= low_bit(s[i + 1])) return false;
  return true;
}

// Random apart set: each element occupies a fresh run of bits above the last.
std::vector<Natural> random_apart(std::mt19937_64& rng, std::size_t size, unsigned first_low, unsigned top_bits) {
  std::vector<Natural> out;
  unsigned low = first_low;
  for (std::size_t i = 0; i < size; ++i) {
    const unsigned remaining = static_cast<unsigned>(size - i);
    const unsigned room = top_bits - low - (remaining - 1);
    const unsigned width = 1 + static_cast<unsigned>(rng() % std::max(1u, std::min(room, 3u)));
    Natural v = Natural{1} << low;
    for (unsigned b = low + 1; b < low + width; ++b)
      if (rng() & 1u) v |= Natural{1} << b;
    out.push_back(v);
    low = high_bit(v) + 1 + static_cast<unsigned>(rng() % 2);
    if (low + (remaining - 1) > top_bits) low = high_bit(v) + 1;
  }
  return out;
}

std::string join(const std::vector<Natural>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<Natural> random_injective(std::mt19937_64& rng, std::size_t len, Natural top) {
  std::vector<Natural> v;
  while (v.size() < len) {
    const Natural x = 1 + rng() % top;
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
  }
  return v;
}

// Descending sequence over {0..top}: each step lowers one component and may
// pad with copies of it, or truncates.
std::vector<std::vector<Natural>> random_descent(std::mt19937_64& rng, Natural top, std::size_t max_terms,
                                                 std::size_t max_exponents) {
  std::vector<std::vector<Natural>> terms{{top, top}};
  std::size_t total = 2;
  while (terms.size() < max_terms) {
    auto t = terms.back();
    const std::size_t p = rng() % t.size();
    if (t[p] == 0 || rng() % 4 == 0) {
      t.resize(p);
      if (t.empty()) break;
    } else {
      --t[p];
      t.resize(p + 1);
      const std::size_t extra = rng() % 2;
      for (std::size_t e = 0; e < extra; ++e) t.push_back(t[p]);
    }
    if (total + t.size() > max_exponents) break;
    total += t.size();
    terms.push_back(t);
  }
  return terms;
}

json instance_json(const std::string& principle, const json& params, const json& payload) {
  return {{"format_version", kFormatVersion}, {"principle", principle}, {"params", params}, {"payload", payload}};
}
json coloring_payload(const AnyColoring& c) { return {{"coloring", coloring_spec(c)}}; }

// ---------------------------------------------------------------------------

Outcome support_laws() {
  Outcome o;
  for (Natural n = 1; n < (Natural{1} << 16) && o.ok; ++n) {
    const auto sup = support(n);
    Natural back = 0;
    for (std::size_t i = 0; i < sup.size(); ++i) {
      back += Natural{1} << sup[i];
      if (i) o.require(sup[i - 1] < sup[i], "support not ascending at " + std::to_string(n));
    }
    o.require(back == n, "support does not reassemble " + std::to_string(n));
    const unsigned l = lambda(n), m = mu(n);
    o.require(l == low_bit(n) && l == sup.front(), "lambda wrong at " + std::to_string(n));
    o.require(m == high_bit(n) && m == sup.back(), "mu wrong at " + std::to_string(n));
    o.require((n & (~n + 1)) == (Natural{1} << l), "2^lambda is not the lowest set bit at " + std::to_string(n));
    o.require((Natural{1} << m) <= n && n < (Natural{1} << (m + 1)), "mu bracket fails at " + std::to_string(n));
    o.require(l <= m, "lambda > mu at " + std::to_string(n));
    o.require(lambda_minus(n) == (l > 0 ? l - 1 : 0), "lambda_minus wrong at " + std::to_string(n));
    o.require(is_power_of_two(n) == (l == m), "power-of-two test wrong at " + std::to_string(n));
  }
  if (o.ok) o.detail = "65535 naturals";
  return o;
}

Outcome apart_sum_law() {
  Outcome o;
  std::mt19937_64 rng(2012);
  std::size_t sets = 0;
  while (sets < 100000 && o.ok) {
    const std::size_t size = 1 + rng() % 4;
    const auto s = random_apart(rng, size, static_cast<unsigned>(rng() % 4), 12);
    if (s.back() >= (Natural{1} << 12)) continue;
    ++sets;
    o.require(oracle_apart(s), "generator produced a non-apart set");
    const FiniteNatSet h(s);
    o.require(is_apart(h).apart, "is_apart rejects apart " + join(s));
    Natural total = 0;
    for (Natural x : s) total += x;
    o.require(lambda(total) == low_bit(s.front()), "lambda(sum) != lambda(min) for " + join(s));
    o.require(mu(total) == high_bit(s.back()), "mu(sum) != mu(max) for " + join(s));
    std::set<Natural> sums;
    for (unsigned mask = 1; mask < (1u << size); ++mask) {
      std::vector<std::size_t> idx;
      Natural t = 0;
      for (std::size_t i = 0; i < size; ++i)
        if (mask >> i & 1u) {
          idx.push_back(i);
          t += s[i];
        }
      o.require(index_sum(h, idx) == t, "index_sum disagrees on " + join(s));
      sums.insert(t);
    }
    o.require(sums.size() == (1u << size) - 1, "index sums collide on " + join(s));
    const auto en = fs_enumerate(h, SumMode::all());
    o.require(en.sums.size() == sums.size(), "fs_enumerate size differs on " + join(s));
    // Arbitrary sets: apartness decision agrees with the oracle.
    std::vector<Natural> any;
    for (std::size_t i = 0; i < size; ++i) any.push_back(1 + rng() % 4095);
    std::sort(any.begin(), any.end());
    any.erase(std::unique(any.begin(), any.end()), any.end());
    o.require(is_apart(FiniteNatSet(any)).apart == oracle_apart(any), "is_apart disagrees on " + join(any));
  }
  if (o.ok) o.detail = std::to_string(sets) + " apart sets";
  return o;
}

Outcome canonical_suite(const Scratch& dir) {
  Outcome o;
  std::mt19937_64 rng(33);
  const Natural dom = Natural{1} << 16;
  const std::vector<std::pair<AnyColoring, std::string>> witnesses{
      {basic::constant(0, dom), "{1}"},
      {basic::identity(dom), "{2}"},
      {basic::lambda_coloring(dom), "{3}"},
      {basic::mu_coloring(dom), "{4}"},
      {basic::pair_lambda_mu(dom), "{5}"},
  };
  std::vector<std::string> files;
  for (std::size_t w = 0; w < witnesses.size(); ++w)
    files.push_back(dir.write("witness" + std::to_string(w) + ".json", coloring_file(witnesses[w].first)));
  for (int trial = 0; trial < 10 && o.ok; ++trial) {
    const auto h = random_apart(rng, 6, static_cast<unsigned>(rng() % 2), 16);
    for (std::size_t w = 0; w < witnesses.size(); ++w) {
      const auto r = cli({"classify", "--coloring", files[w], "--set", join(h), "--cap", "3"});
      o.require(r.exit_code == 0, "classify failed: " + r.text());
      if (!o.ok) break;
      o.require(r.trace["outcome"]["text"] == witnesses[w].second,
                "witness " + witnesses[w].second + " on " + join(h) + " classified as " +
                    r.trace["outcome"]["text"].dump());
    }
  }

  // Random colorings on [0, 2^12): functions of x, of lambda, of mu, of both.
  const Natural d = Natural{1} << 12;
  auto random_values = [&](Natural range) {
    const int family = static_cast<int>(rng() % 4);
    std::vector<Natural> g(64 * 64);
    for (auto& x : g) x = rng() % range;
    const std::uint64_t salt = rng();
    std::vector<Natural> v(d);
    for (Natural x = 0; x < d; ++x) {
      const unsigned l = lambda(x), m = mu(x);
      switch (family) {
        case 0: v[x] = (x * 0x9E3779B97F4A7C15ull ^ salt) % range; break;
        case 1: v[x] = g[l]; break;
        case 2: v[x] = g[m]; break;
        default: v[x] = g[l * 64 + m]; break;
      }
    }
    return v;
  };
  std::size_t lreg_nonempty = 0, range_nonempty = 0, judged_range = 0;
  for (int trial = 0; trial < 1000 && o.ok; ++trial) {
    // lambda-regressive: clip of a random coloring.
    const auto c = clip_to_lambda_regressive(basic::table(random_values(1 + rng() % 12)));
    const auto h = random_apart(rng, 6, static_cast<unsigned>(rng() % 5), 12);
    o.require(lambda(h.front()) < h.size() - 1, "generator broke |H| - 1 > lambda(min H)");
    auto r = cli({"classify", "--coloring", dir.write("lreg.json", coloring_file(c)), "--set", join(h), "--cap", "2"});
    o.require(r.exit_code == 0, "classify failed: " + r.text());
    if (!o.ok) break;
    std::vector<int> cases = r.trace["outcome"]["cases"];
    lreg_nonempty += !cases.empty();
    for (int k : cases)
      o.require(k != 2 && k != 4 && k != 5, "lambda-regressive coloring on " + join(h) + " shows case " +
                                                std::to_string(k));

    // Finite range k: skip H whose tested sums already see more than |H| - 1 colors.
    const Natural k = 2 + rng() % 3;
    const auto f = basic::table(random_values(k));
    const auto g = random_apart(rng, static_cast<std::size_t>(k) + 1 + rng() % 2, 0, 12);
    std::set<Natural> seen;
    for (std::size_t i = 0; i < g.size(); ++i) {
      seen.insert(f(g[i]));
      for (std::size_t j = i + 1; j < g.size(); ++j) seen.insert(f(g[i] + g[j]));
    }
    if (!(g.size() > seen.size())) continue;
    ++judged_range;
    r = cli({"classify", "--coloring", dir.write("krange.json", coloring_file(f)), "--set", join(g), "--cap", "2"});
    o.require(r.exit_code == 0, "classify failed: " + r.text());
    if (!o.ok) break;
    cases = r.trace["outcome"]["cases"].get<std::vector<int>>();
    range_nonempty += !cases.empty();
    for (int x : cases) o.require(x == 1, "range-" + std::to_string(k) + " coloring shows case " + std::to_string(x));
  }
  o.require(judged_range >= 500, "fewer than 500 finite-range trials judged");
  if (o.ok)
    o.detail = "5 witnesses x 10 sets; 1000 lambda-regressive (" + std::to_string(lreg_nonempty) +
               " nonempty), " + std::to_string(judged_range) + " finite-range (" + std::to_string(range_nonempty) +
               " nonempty)";
  return o;
}

Outcome phi_validity(const Scratch& dir) {
  Outcome o;
  std::mt19937_64 rng(404);
  const Natural cd = Natural{1} << 12;
  auto source_for = [&](const ReductionSpec& spec) -> json {
    const Natural k = 2 + rng() % 3;
    const std::string& p = spec.source;
    if (p == "rt1") {
      const AnyColoring c = rng() % 2 ? basic::hash_mod(rng(), k, cd) : basic::mod(k, cd);
      return instance_json("rt1", {{"k", k}}, coloring_payload(c));
    }
    if (p == "ht") {
      const std::string mode = (spec.name.find("_eq") != std::string::npos ? "exactly:" : "at_most:") +
                               std::to_string(spec.n);
      return instance_json("ht", {{"k", k}, {"mode", mode}, {"apart", true}},
                           coloring_payload(basic::hash_mod(rng(), k, cd)));
    }
    if (p == "rt") {
      const std::size_t n = spec.n;
      AnyColoring f = basic::tuple_hash_mod(n, 40, rng(), k);
      if (rng() % 3 == 0) f = basic::sum_mod(n, 40, k);
      return instance_json("rt", {{"n", n}, {"k", k}}, coloring_payload(f));
    }
    if (p == "lreght") {
      const auto c = clip_to_lambda_regressive(basic::hash_mod(rng(), 2 + rng() % 6, cd));
      return instance_json("lreght", {{"mode", "exactly:" + std::to_string(spec.n)}, {"apart", true}},
                           coloring_payload(c));
    }
    if (p == "ran") return instance_json("ran", json::object(), {{"table", random_injective(rng, 1 + rng() % 12, 24)}});
    const auto alpha = make_sequence(LinearOrder::finite(5), random_descent(rng, 1 + rng() % 4, 30, 60));
    return instance_json("wop", json::object(), {{"order", order_to_json(alpha.order)}, {"terms", terms_to_json(alpha)}});
  };

  std::size_t checked = 0;
  for (const auto& [name, spec] : reduction_registry()) {
    for (int trial = 0; trial < 1000 && o.ok; ++trial) {
      const auto src = dir.write("src.json", source_for(spec));
      const auto out = dir.path("phi.json");
      const auto r = cli({"construct", "--reduction", name, "--instance", src, "--out", out, "--bound", "10"});
      o.require(r.exit_code == 0, name + ": construct failed: " + r.text());
      if (!o.ok) break;
      // Re-check with the predicates directly, on the file as written.
      const auto t = read_instance_file(parse_json(read_text(out), "phi"), false);
      if (t.principle == "lreght") {
        const auto v = is_lambda_regressive(t.unary());
        o.require(static_cast<bool>(v), name + ": phi output not lambda-regressive");
      } else {
        const auto v = is_regressive(t.tuple(), t.ground());
        o.require(static_cast<bool>(v), name + ": phi output not regressive");
      }
      ++checked;
    }
  }
  if (o.ok) o.detail = std::to_string(checked) + " phi outputs over " + std::to_string(reduction_registry().size()) +
                       " reductions";
  return o;
}

Outcome ran_round_trip(const Scratch& dir) {
  Outcome o;
  std::mt19937_64 rng(5150);
  std::size_t tables = 0, queries = 0;
  for (; tables < 120 && o.ok; ++tables) {
    const auto values = random_injective(rng, 1 + rng() % 12, 24);
    const auto src = dir.write("ran.json", instance_json("ran", json::object(), {{"table", values}}));
    for (const char* name : {"ran_to_reght2", "ran_to_reght3"}) {
      const auto r = cli({"verify", "--reduction", name, "--instance", src, "--bound", "20", "--size", "4"});
      o.require(r.exit_code == 0, std::string(name) + " on " + join(values) + ": " + r.text());
      if (!o.ok) break;
      const auto& out = r.trace["outcome"];
      const auto& phi = out["phi"]["payload"]["coloring"];
      o.require(phi["builtin"] == "range", "phi is not the range coloring");
      const auto h = out["solver"]["solution"].get<std::vector<Natural>>();
      o.require(h.size() == 4, "solution size is not 4");
      o.require(mu(h.back()) >= values.size(), "last element misses the mu witness");
      const Natural bound = out["psi_output"]["bound"];
      std::vector<Natural> expect;
      for (Natural x = 0; x < bound; ++x)
        if (std::find(values.begin(), values.end(), x) != values.end()) expect.push_back(x);
      o.require(out["psi_output"]["range"].get<std::vector<Natural>>() == expect,
                std::string(name) + ": decoded range differs from table scan on " + join(values));
      queries += bound;
    }
  }
  if (o.ok)
    o.detail = std::to_string(tables) + " tables x 2 reductions, " + std::to_string(queries) +
               " certified queries, all equal to the table scan";
  return o;
}

Outcome reg_to_rt(const Scratch& dir) {
  Outcome o;
  std::mt19937_64 rng(640);
  std::size_t produced[2] = {0, 0};
  const std::pair<const char*, std::vector<std::string>> plans[2] = {
      {"rtk_to_reg2", {"10", "9", "8"}},
      {"rt_to_reg2", {"10", "9", "8", "7"}},
  };
  for (int trial = 0; trial < 100 && o.ok; ++trial) {
    std::vector<Natural> values(40 * 39 / 2);
    for (auto& v : values) v = rng() % 3;
    const auto f = basic::tuple_table(2, 40, values, Natural{3});
    const auto src = dir.write("rt.json", instance_json("rt", {{"n", 2}, {"k", 3}}, coloring_payload(f)));
    for (int which = 0; which < 2 && o.ok; ++which) {
      for (const auto& size : plans[which].second) {
        const auto r = cli({"verify", "--reduction", plans[which].first, "--instance", src, "--size", size});
        o.require(r.exit_code != 3, std::string(plans[which].first) + " hit the internal-contradiction path");
        if (!o.ok) break;
        if (r.exit_code != 0) {
          // Only exhaustion or a psi precondition miss may stop a round trip.
          const auto& v = r.trace["outcome"]["verdicts"];
          for (const char* key : {"instance_valid", "target_instance_valid", "target_solution_valid", "solution_valid"})
            o.require(v[key].is_null() || v[key]["ok"].get<bool>(),
                      std::string(plans[which].first) + ": verdict " + key + " failed: " + r.text());
          continue;
        }
        const auto hs = r.trace["outcome"]["psi_output"]["set"].get<std::vector<Natural>>();
        o.require(hs.size() >= 2, "output smaller than the arity");
        std::set<Natural> colors;
        for (std::size_t i = 0; i < hs.size(); ++i)
          for (std::size_t j = i + 1; j < hs.size(); ++j) colors.insert(f(std::vector<Natural>{hs[i], hs[j]}));
        o.require(colors.size() == 1, std::string(plans[which].first) + " output " + join(hs) + " not homogeneous");
        ++produced[which];
        break;
      }
    }
  }
  if (o.ok)
    o.detail = "100 colorings; outputs from rtk " + std::to_string(produced[0]) + ", rt " +
               std::to_string(produced[1]) + ", all homogeneous; the rest stopped on a precondition; exit 3 never seen";
  return o;
}

// Greedy descent walked directly on the terms, with candidate stream indices
// limited to < horizon. Mirrors the extraction rule without the coloring.
std::vector<Natural> oracle_walk(const std::vector<std::vector<Natural>>& terms, std::size_t horizon) {
  struct Slot {
    std::size_t term, pos;
    Natural beta;
  };
  std::vector<Slot> s;
  for (std::size_t t = 0; t < terms.size(); ++t)
    for (std::size_t p = 0; p < terms[t].size(); ++p) s.push_back({t, p, terms[t][p]});
  std::vector<Natural> sigma;
  std::size_t term = 0, min_pos = 0;
  while (true) {
    bool moved = false;
    for (std::size_t i = 0; i < s.size() && i + 1 < horizon; ++i) {
      if (s[i].term != term || s[i].pos < min_pos) continue;
      std::size_t j = i + 1;
      while (j < s.size() && !(s[j].pos == s[i].pos && s[j].beta < s[i].beta)) ++j;
      if (j == s.size()) continue;
      sigma.push_back(s[i].beta);
      term = s[j].term;
      min_pos = s[i].pos;
      moved = true;
      break;
    }
    if (!moved) return sigma;
  }
}

Outcome wop_round_trip(const Scratch& dir) {
  Outcome o;
  std::mt19937_64 rng(1999);
  std::size_t total_sigma = 0, lemma_checks = 0;
  for (int trial = 0; trial < 50 && o.ok; ++trial) {
    // Known descent: leading exponents d_0 > ... > d_{d-1} in groups, so the
    // walk can always decrease position 1 until the last group.
    const std::size_t d = 1 + rng() % 4;
    std::vector<Natural> leads{0, 1, 2, 3, 4};
    std::shuffle(leads.begin(), leads.end(), rng);
    leads.resize(d + 1);
    std::sort(leads.begin(), leads.end(), std::greater<>());
    std::vector<std::vector<Natural>> terms;
    std::size_t exps = 0;
    for (Natural lead : leads) {
      std::vector<Natural> t{lead};
      const std::size_t pad = rng() % 3;
      for (std::size_t e = 0; e < pad; ++e) t.push_back(rng() % (lead + 1));
      std::sort(t.begin() + 1, t.end(), std::greater<>());
      for (std::size_t e = 1; e < t.size(); ++e) t[e] = std::min(t[e], t[e - 1]);
      // A few strictly smaller followers inside the group: drop the tail.
      std::vector<std::vector<Natural>> group{t};
      while (group.back().size() > 1 && rng() % 2 && terms.size() + group.size() < 30) {
        auto u = group.back();
        u.pop_back();
        group.push_back(u);
      }
      for (auto& g : group) {
        if (terms.size() >= 30 || exps + g.size() > 50) break;
        exps += g.size();
        terms.push_back(g);
      }
    }
    const auto alpha = make_sequence(LinearOrder::finite(5), terms);
    o.require(static_cast<bool>(validate_descending(alpha)), "generator produced a non-descending sequence");
    const auto full = oracle_walk(terms, SIZE_MAX);
    o.require(full.size() >= d, "generator descent shorter than recorded d");

    const auto src = dir.write("wop.json", instance_json("wop", json::object(),
                                                         {{"order", order_to_json(alpha.order)},
                                                          {"terms", terms_to_json(alpha)}}));
    const auto r = cli({"verify", "--reduction", "wop_to_reght2", "--instance", src});
    o.require(r.exit_code == 0, "wop verify failed: " + r.text());
    if (!o.ok) break;
    const auto& out = r.trace["outcome"];
    const auto h = out["solver"]["solution"].get<std::vector<Natural>>();
    const auto sigma = out["psi_output"]["sequence"].get<std::vector<Natural>>();
    const std::size_t usable = h.size() - 2 - 1;
    const auto certified = oracle_walk(terms, lambda(h[usable]));
    o.require(sigma.size() >= std::min(d, certified.size()),
              "sigma length " + std::to_string(sigma.size()) + " below min(d, certified)");
    for (std::size_t i = 1; i < sigma.size(); ++i) o.require(sigma[i] < sigma[i - 1], "sigma not descending");
    for (Natural e : sigma) {
      bool present = false;
      for (const auto& t : terms) present = present || std::find(t.begin(), t.end(), e) != t.end();
      o.require(present, "sigma element " + std::to_string(e) + " is not an exponent of alpha");
    }
    o.require(std::equal(sigma.begin(), sigma.end(), full.begin(), full.begin() + std::min(sigma.size(), full.size())) &&
                  sigma.size() <= full.size(),
              "sigma is not a prefix of the direct walk");
    total_sigma += sigma.size();

    // Initial-segment lemma: a term followed by at least its length many terms
    // is decreased at a shared position within that many steps.
    for (std::size_t i = 1; i <= alpha.size(); ++i) {
      if (alpha.size() - i < alpha.term(i).length()) continue;
      const auto w = initial_segment_witness(alpha, i);
      o.require(w.has_value(), "initial-segment lemma fails at term " + std::to_string(i));
      if (!o.ok) break;
      const auto [ip, j] = *w;
      o.require(ip > i && ip <= i + alpha.term(i).length(), "lemma witness too far");
      o.require(j <= std::min(alpha.term(i).length(), alpha.term(ip).length()) &&
                    terms[ip - 1][j - 1] < terms[i - 1][j - 1],
                "lemma witness does not decrease");
      ++lemma_checks;
    }
  }
  if (o.ok)
    o.detail = "50 sequences, " + std::to_string(total_sigma) + " extracted exponents, " +
               std::to_string(lemma_checks) + " lemma instances";
  return o;
}

Outcome solver_soundness(const Scratch& dir) {
  Outcome o;
  std::mt19937_64 rng(8080);
  std::size_t found = 0, runs = 0, shape_pairs = 0;

  auto run_twice = [&](const std::vector<std::string>& args) {
    const auto a = cli(args);
    const auto b = cli(args);
    ++runs;
    o.require(a.text() == b.text(), "trace differs between identical runs");
    return a;
  };
  auto check_found = [&](const CommandResult& r, const PrincipleInstance& x, const std::string& what) {
    o.require(r.exit_code == 0, what + ": " + r.text());
    if (!o.ok || r.trace["outcome"]["status"] != "found") return;
    ++found;
    const FiniteNatSet h(r.trace["outcome"]["solution"].get<std::vector<Natural>>());
    o.require(static_cast<bool>(validate_solution(x, h)), what + ": solution fails revalidation");
    // Direct predicates on top of the principle check.
    if (x.principle == "ht") {
      const auto e = fs_enumerate(h, x.mode());
      std::set<Natural> colors;
      for (Natural s : e.sums.elements()) colors.insert(x.unary()(s));
      o.require(colors.size() == 1, what + ": sums not monochromatic");
    } else if (x.principle == "lreght") {
      o.require(static_cast<bool>(is_min_term_homogeneous(x.unary(), h, x.mode())), what + ": not min-term-homogeneous");
      o.require(is_apart(h).apart, what + ": not apart");
    } else if (x.principle == "reg") {
      o.require(static_cast<bool>(is_min_homogeneous(x.tuple(), h)), what + ": not min-homogeneous");
    } else if (x.principle == "rt") {
      o.require(is_homogeneous(x.tuple(), h).holds, what + ": not homogeneous");
    }
  };

  for (int trial = 0; trial < 40 && o.ok; ++trial) {
    const Natural k = 2 + rng() % 2;
    const std::string mode = (rng() % 2 ? "exactly:" : "at_most:") + std::to_string(2 + rng() % 2);
    std::vector<PrincipleInstance> xs{
        {"ht", {{"k", k}, {"mode", mode}, {"apart", true}}, basic::hash_mod(rng(), k, 1 << 14)},
        {"lreght", {{"mode", mode}, {"apart", true}}, clip_to_lambda_regressive(basic::hash_mod(rng(), 4, 1 << 14))},
        {"rt", {{"n", 2}, {"k", k}}, basic::tuple_hash_mod(2, 30, rng(), k)},
        {"reg", {{"n", 2}}, basic::y_mod_x(30)},
        {"rt1", {{"k", k}}, basic::hash_mod(rng(), k, 64)},
    };
    for (const auto& x : xs) {
      const auto path = dir.write("solve.json", instance_file(x));
      const std::string size = x.principle == "rt1" ? "5" : (x.principle == "reg" || x.principle == "rt") ? "4" : "3";
      const auto r = run_twice({"solve", "--instance", path, "--size", size, "--bound", "12"});
      check_found(r, read_instance_file(parse_json(read_text(path), "x")), x.principle);
      if (!o.ok) break;
    }
  }

  // Support-shape agreement on determined colorings, bound 2^12.
  for (int trial = 0; trial < 40 && o.ok; ++trial) {
    const auto values = random_injective(rng, 2 + rng() % 6, 10);
    const bool use_wop = trial % 2;
    const auto seq = make_sequence(LinearOrder::finite(3), random_descent(rng, 2, 6, 10));
    const UnaryColoring c = use_wop ? wop_coloring(seq, Natural{1} << 13) : range_coloring(InjectiveFunctionTable(values), Natural{1} << 13);
    const std::string mode = trial % 3 ? "exactly:2" : "at_most:2";
    const PrincipleInstance x{"lreght", {{"mode", mode}, {"apart", true}}, c};
    const auto path = dir.write("shape.json", instance_file(x));
    const std::string last = std::to_string(use_wop ? exponent_stream(seq).length() + 1 : values.size());
    std::vector<std::string> base{"solve", "--instance", path, "--size", "4", "--bound", "12", "--min-lambda", "2",
                                  "--last-mu", last};
    const auto full = run_twice(base);
    base.push_back("--support-shape");
    const auto shaped = run_twice(base);
    check_found(full, x, "lreght full");
    check_found(shaped, x, "lreght shaped");
    if (!o.ok) break;
    o.require(full.trace["outcome"]["status"] == shaped.trace["outcome"]["status"], "support-shape status differs");
    if (full.trace["outcome"]["status"] == "found") {
      const auto a = full.trace["outcome"]["solution"].get<std::vector<Natural>>();
      const auto b = shaped.trace["outcome"]["solution"].get<std::vector<Natural>>();
      o.require(a.size() == b.size(), "support-shape size differs");
      for (std::size_t i = 0; i < a.size() && o.ok; ++i)
        o.require(lambda(a[i]) == lambda(b[i]) && mu(a[i]) == mu(b[i]),
                  "support-shape profile differs: " + join(a) + " vs " + join(b));
      ++shape_pairs;
    }
  }
  o.require(shape_pairs >= 20, "fewer than 20 support-shape comparisons found solutions");
  if (o.ok)
    o.detail = std::to_string(runs) + " solver runs (each twice), " + std::to_string(found) + " found, " +
               std::to_string(shape_pairs) + " support-shape profile matches";
  return o;
}

Outcome apart_extraction() {
  Outcome o;
  std::vector<SumStream> streams{SumStream::powers_of_two(), SumStream::odd_numbers(), SumStream::positive_naturals()};
  for (std::uint64_t seed = 0; streams.size() < 20; ++seed) streams.push_back(SumStream::scattered(seed, 3 + seed % 11));
  std::size_t consumed = 0;
  for (const auto& st : streams) {
    const auto r = extract_apart_from_fs(st, 8, 1'000'000);
    o.require(r.complete && r.elements.size() == 8, st.name() + ": extraction incomplete");
    if (!o.ok) break;
    o.require(oracle_apart(r.elements), st.name() + ": output not apart");
    std::size_t prev_end = 0;
    for (std::size_t e = 0; e < 8; ++e) {
      const auto& b = r.blocks[e];
      o.require(b.begin >= prev_end && b.begin < b.end, st.name() + ": blocks overlap or are empty");
      Natural sum = 0;
      for (std::size_t i = b.begin; i < b.end; ++i) {
        if (i > 0) o.require(st.at(i - 1) < st.at(i), st.name() + ": stream not increasing");
        sum += st.at(i);
      }
      o.require(sum == r.elements[e], st.name() + ": block does not sum to its element");
      prev_end = b.end;
    }
    consumed += r.consumed;
  }
  if (o.ok) o.detail = "20 streams x 8 elements, " + std::to_string(consumed) + " stream reads";
  return o;
}

}  // namespace

int main() {
  Scratch dir;
  struct Criterion {
    int id;
    std::string name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "support laws on [1, 2^16)", 1, support_laws},
      {2, "apart-sum law, 1e5 sampled sets", 10, apart_sum_law},
      {3, "canonical witnesses and exclusions", 30, [&] { return canonical_suite(dir); }},
      {4, "phi validity, 1e3 sources per reduction", 60, [&] { return phi_validity(dir); }},
      {5, "RAN round trip", 300, [&] { return ran_round_trip(dir); }},
      {6, "REG to RT round trips, n=2 k=3", 120, [&] { return reg_to_rt(dir); }},
      {7, "WOP round trip and initial-segment lemma", 120, [&] { return wop_round_trip(dir); }},
      {8, "solver soundness, determinism, support shape", 300, [&] { return solver_soundness(dir); }},
      {9, "apart extraction from 20 streams", 10, apart_extraction},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = s < c.limit_s;
    const bool pass = o.ok && in_time;
    if (!pass) ++failures;
    std::printf("%s %d %s: %s [%.2f s, limit %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), s, c.limit_s, in_time ? "" : ", over limit");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
