// Independent checker for driver reports. It re-reads the raw input files
// named in the report, then recomputes the vertex-partition conditions and the
// regular-cell counts from scratch: part sizes and the exceptional class
// against eps n, and every counted cell's regularity verdict by brute force
// over all candidate sub-boxes. Nothing here links against the engine.
//
//   validate_report REPORT.json
//
// Exit 0 when every condition is confirmed, 1 otherwise.

#include <json.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using Json = nlohmann::json;
using Q = boost::multiprecision::cpp_rational;
using Tuple = std::vector<std::size_t>;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
  std::cout << (ok ? "ok    " : "FAIL  ") << what << '\n';
  if (!ok) ++failures;
}

Q frac(const Json& j) {
  const std::string s = j.get<std::string>();
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Q(boost::multiprecision::cpp_int(s));
  return Q(boost::multiprecision::cpp_int(s.substr(0, slash)), boost::multiprecision::cpp_int(s.substr(slash + 1)));
}

std::string str(const Q& q) {
  std::ostringstream os;
  os << numerator(q) << '/' << denominator(q);
  return os.str();
}

// Line-oriented input: '#' comments, a header row, then one tuple per line.
std::vector<std::vector<std::size_t>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<std::size_t>> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    std::istringstream ls(line);
    std::vector<std::size_t> row;
    long long v;
    while (ls >> v) row.push_back(static_cast<std::size_t>(v));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + " has no header");
  return rows;
}

struct EdgeSet {
  std::size_t k = 0;
  std::set<Tuple> edges;

  bool has(const Tuple& t) const { return edges.count(t) != 0; }
};

EdgeSet load(const std::string& path, bool undirected) {
  auto rows = read_rows(path);
  EdgeSet e;
  e.k = rows.front().front();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    Tuple t = rows[i];
    if (t.size() != e.k) throw std::runtime_error(path + ": tuple of the wrong arity");
    if (undirected) {
      std::sort(t.begin(), t.end());
      do {
        e.edges.insert(t);
      } while (std::next_permutation(t.begin(), t.end()));
    } else {
      e.edges.insert(t);
    }
  }
  return e;
}

struct Axis {
  std::size_t universe = 0;
  std::vector<std::vector<std::size_t>> parts;
  std::vector<std::size_t> exceptional;
};

// Candidate sub-cells per coordinate: bitmasks over the part's vertices;
// contiguous runs only when the base cells are intervals.
std::vector<std::uint32_t> candidates(std::size_t size, bool intervals) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t m = 1; m < (std::uint32_t{1} << size); ++m) {
    if (intervals) {
      const std::uint32_t shifted = m >> __builtin_ctz(m);
      if ((shifted & (shifted + 1)) != 0) continue;
    }
    out.push_back(m);
  }
  return out;
}

// True iff the edge set is eps-regular in the box parts[0] x ... x parts[k-1]
// under the uniform measure.
bool regular_in_box(const EdgeSet& g, const std::vector<const std::vector<std::size_t>*>& parts, const Q& eps,
                    bool intervals) {
  const std::size_t k = parts.size();
  const auto a = numerator(eps);
  const auto b = denominator(eps);
  long long vol = 1;
  for (auto* p : parts) vol *= static_cast<long long>(p->size());

  // membership table over the box in mixed radix
  std::vector<char> in(static_cast<std::size_t>(vol));
  long long ev = 0;
  for (long long code = 0; code < vol; ++code) {
    Tuple t(k);
    long long c = code;
    for (std::size_t i = k; i-- > 0;) {
      t[i] = (*parts[i])[static_cast<std::size_t>(c % static_cast<long long>(parts[i]->size()))];
      c /= static_cast<long long>(parts[i]->size());
    }
    in[static_cast<std::size_t>(code)] = g.has(t);
    ev += in[static_cast<std::size_t>(code)];
  }

  std::vector<std::vector<std::uint32_t>> cand(k);
  for (std::size_t i = 0; i < k; ++i) cand[i] = candidates(parts[i]->size(), intervals);

  auto violates = [&](long long eu, long long vu) {
    if (!(boost::multiprecision::cpp_int(vu) * b > a * vol)) return false;
    boost::multiprecision::cpp_int diff = boost::multiprecision::cpp_int(eu) * vol - boost::multiprecision::cpp_int(ev) * vu;
    if (diff < 0) diff = -diff;
    return diff * b >= a * boost::multiprecision::cpp_int(vu) * vol;
  };

  if (k == 2) {
    const std::size_t s2 = parts[1]->size();
    std::vector<std::uint32_t> col(s2, 0);
    for (std::size_t x = 0; x < parts[0]->size(); ++x) {
      for (std::size_t y = 0; y < s2; ++y) {
        if (in[x * s2 + y]) col[y] |= std::uint32_t{1} << x;
      }
    }
    std::vector<long long> row(s2), sums(std::size_t{1} << s2);
    for (auto m1 : cand[0]) {
      for (std::size_t y = 0; y < s2; ++y) row[y] = __builtin_popcount(m1 & col[y]);
      sums[0] = 0;
      for (std::uint32_t m2 = 1; m2 < (std::uint32_t{1} << s2); ++m2) {
        sums[m2] = sums[m2 & (m2 - 1)] + row[static_cast<std::size_t>(__builtin_ctz(m2))];
      }
      const long long c1 = __builtin_popcount(m1);
      for (auto m2 : cand[1]) {
        if (violates(sums[m2], c1 * __builtin_popcount(m2))) return false;
      }
    }
    return true;
  }

  std::vector<std::size_t> pick(k, 0);
  while (true) {
    long long vu = 1, eu = 0;
    for (std::size_t i = 0; i < k; ++i) vu *= __builtin_popcount(cand[i][pick[i]]);
    for (long long code = 0; code < vol; ++code) {
      if (!in[static_cast<std::size_t>(code)]) continue;
      long long c = code;
      bool inside = true;
      for (std::size_t i = k; i-- > 0 && inside;) {
        const auto pos = static_cast<std::uint32_t>(c % static_cast<long long>(parts[i]->size()));
        c /= static_cast<long long>(parts[i]->size());
        inside = (cand[i][pick[i]] >> pos) & 1U;
      }
      eu += inside;
    }
    if (violates(eu, vu)) return false;
    std::size_t i = k;
    while (i > 0 && ++pick[i - 1] == cand[i - 1].size()) pick[--i] = 0;
    if (i == 0) return true;
  }
}

Q binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  Q r = 1;
  for (std::size_t i = 0; i < k; ++i) r = r * Q(n - i) / Q(i + 1);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: validate_report REPORT.json\n";
    return 1;
  }
  try {
    std::ifstream in(argv[1]);
    if (!in) throw std::runtime_error(std::string("cannot open ") + argv[1]);
    const Json rep = Json::parse(in);
    const Json& th = rep.at("theorem");
    const Json& summary = rep.at("instance_summary");
    const std::string name = th.at("name");
    const std::string kind = summary.at("kind");
    const Q eps = frac(th.at("eps"));
    const bool intervals = name == "cube-intervals";
    const bool unordered = name == "undirected";
    const bool boxes = name == "k-partite";
    if (name != "directed" && name != "undirected" && name != "k-partite" && name != "cube-sets" && !intervals) {
      throw std::runtime_error("report is not a theorem run: " + name);
    }
    check(eps == frac(rep.at("config").at("eps")), "eps echoed as " + str(eps));

    // raw inputs
    std::vector<EdgeSet> sets;
    for (const auto& s : summary.at("sets")) sets.push_back(load(s.at("path"), unordered));
    const std::size_t k = sets.front().k;
    std::vector<std::size_t> universes;
    if (boxes) {
      for (const auto& c : summary.at("class_sizes")) universes.push_back(c);
    } else {
      universes.assign(1, summary.contains("m") ? summary.at("m").get<std::size_t>() : summary.at("n").get<std::size_t>());
    }

    // vertex partitions
    std::vector<Axis> axes;
    for (const auto& c : th.at("coordinates")) {
      Axis ax;
      ax.universe = c.at("universe");
      for (const auto& p : c.at("parts")) ax.parts.push_back(p.get<std::vector<std::size_t>>());
      ax.exceptional = c.at("exceptional").get<std::vector<std::size_t>>();
      axes.push_back(std::move(ax));
    }
    check(axes.size() == universes.size(), "one vertex partition per class");
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const Axis& ax = axes[i];
      const std::string tag = "class " + std::to_string(i) + ": ";
      check(ax.universe == universes.at(i), tag + "universe matches the input");
      std::vector<int> seen(ax.universe, 0);
      bool in_range = true;
      auto mark = [&](const std::vector<std::size_t>& v) {
        for (auto x : v) {
          if (x >= ax.universe) in_range = false;
          else ++seen[x];
        }
      };
      for (const auto& p : ax.parts) mark(p);
      mark(ax.exceptional);
      check(in_range && std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }),
            tag + "Q0..Qq partition the vertex set");
      check(!ax.parts.empty(), tag + "q = " + std::to_string(ax.parts.size()) + " >= 1");
      bool equal = true, small = true, contiguous = true;
      for (const auto& p : ax.parts) {
        equal = equal && p.size() == ax.parts.front().size();
        small = small && Q(p.size()) < eps * Q(ax.universe);
        if (intervals) {
          std::vector<std::size_t> s = p;
          std::sort(s.begin(), s.end());
          contiguous = contiguous && s.back() - s.front() + 1 == s.size();
        }
      }
      const std::size_t size = ax.parts.empty() ? 0 : ax.parts.front().size();
      check(equal && small, tag + "|Q1| = ... = |Qq| = " + std::to_string(size) + " < eps n = " +
                                str(eps * Q(ax.universe)));
      if (intervals) check(contiguous, tag + "every part is an interval");
      check(Q(ax.exceptional.size()) < eps * Q(ax.universe),
            tag + "|Q0| = " + std::to_string(ax.exceptional.size()) + " < eps n");
    }

    // regular-cell counts
    const Json& counts = th.at("counts");
    check(counts.size() == sets.size(), "one count per input set");
    for (std::size_t si = 0; si < sets.size() && si < counts.size(); ++si) {
      const std::string tag = "set " + std::to_string(si) + ": ";
      std::vector<std::pair<Tuple, bool>> reported;
      for (const auto& c : counts[si].at("cells")) reported.emplace_back(c.at("index").get<Tuple>(), c.at("regular"));
      std::sort(reported.begin(), reported.end());

      // enumerate index tuples the theorem counts
      std::vector<Tuple> tuples;
      std::vector<std::size_t> q(k);
      for (std::size_t i = 0; i < k; ++i) q[i] = axes[boxes ? i : 0].parts.size();
      Tuple t(k, 0);
      while (true) {
        bool distinct = true;
        for (std::size_t i = 0; i < k && !boxes; ++i) {
          for (std::size_t j = i + 1; j < k; ++j) distinct = distinct && t[i] != t[j];
        }
        if (distinct) tuples.push_back(t);
        std::size_t i = k;
        while (i > 0 && ++t[i - 1] == q[i - 1]) t[--i] = 0;
        if (i == 0) break;
      }

      std::vector<std::pair<Tuple, bool>> mine;
      for (const auto& idx : tuples) {
        std::vector<const std::vector<std::size_t>*> parts;
        for (std::size_t i = 0; i < k; ++i) parts.push_back(&axes[boxes ? i : 0].parts[idx[i]]);
        mine.emplace_back(idx, regular_in_box(sets[si], parts, eps, intervals));
      }
      std::size_t agree = 0;
      for (std::size_t x = 0; x < mine.size() && x < reported.size(); ++x) {
        agree += mine[x] == reported[x];
      }
      check(reported.size() == mine.size() && agree == mine.size(),
            tag + "brute-force verdicts match the report on " + std::to_string(agree) + "/" +
                std::to_string(mine.size()) + " cells");

      std::size_t good = 0;
      Q required;
      if (unordered) {
        std::set<Tuple> bad;
        for (const auto& [idx, ok] : mine) {
          if (ok) continue;
          Tuple s = idx;
          std::sort(s.begin(), s.end());
          bad.insert(s);
        }
        std::set<Tuple> all;
        for (const auto& [idx, ok] : mine) {
          Tuple s = idx;
          std::sort(s.begin(), s.end());
          all.insert(s);
        }
        good = all.size() - bad.size();
        required = (1 - eps) * binomial(q[0], k);
      } else {
        for (const auto& [idx, ok] : mine) good += ok;
        Q total = 1;
        for (auto x : q) total *= Q(x);
        required = (1 - eps) * total;
      }
      check(good == counts[si].at("good").get<std::size_t>(), tag + "recount " + std::to_string(good) +
                                                                   " matches the report");
      check(Q(good) >= required, tag + std::to_string(good) + " good cells >= " + str(required));
    }

    // energy increments of the final run
    const Q engine_eps = frac(rep.at("config").at("engine_eps"));
    const Q floor_gain = engine_eps * engine_eps * engine_eps * engine_eps;
    bool gains = true;
    for (const auto& step : rep.at("trace")) {
      gains = gains && frac(step.at("index_after")) - frac(step.at("index_before")) >= floor_gain &&
              frac(step.at("index_after")) <= 1;
    }
    check(gains, "every refinement gains at least " + str(floor_gain) + " in index");
  } catch (const std::exception& e) {
    std::cout << "FAIL  " << e.what() << '\n';
    ++failures;
  }
  std::cout << (failures == 0 ? "VALID" : "INVALID") << '\n';
  return failures == 0 ? 0 : 1;
}
