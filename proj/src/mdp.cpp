#include "ucbvi/mdp.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ucbvi {

namespace {

constexpr double kRowSumTolerance = 1e-9;

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument(what);
}

}  // namespace

void TabularMdp::validate() const {
  if (num_states < 1 || num_actions < 1 || horizon < 1)
    fail("TabularMdp: S, A, H must all be >= 1");
  if (initial_state < 0 || initial_state >= num_states)
    fail("TabularMdp: initial_state out of range");
  const std::size_t sa = static_cast<std::size_t>(num_states) * num_actions;
  if (reward.size() != sa || transition.size() != sa * num_states)
    fail("TabularMdp: table sizes do not match dimensions");
  for (int x = 0; x < num_states; ++x) {
    for (int a = 0; a < num_actions; ++a) {
      const double rv = r(x, a);
      if (!(rv >= 0.0 && rv <= 1.0))
        fail("TabularMdp: reward outside [0,1] at (x=" + std::to_string(x) +
             ", a=" + std::to_string(a) + ")");
      double sum = 0.0;
      for (int y = 0; y < num_states; ++y) {
        const double pv = p(x, a, y);
        if (pv < 0.0)
          fail("TabularMdp: negative transition probability at (x=" +
               std::to_string(x) + ", a=" + std::to_string(a) + ")");
        sum += pv;
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance)
        fail("TabularMdp: transition row (x=" + std::to_string(x) +
             ", a=" + std::to_string(a) + ") sums to " + std::to_string(sum));
    }
  }
}

int argmax_lowest(std::span<const double> row) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(row.size()); ++i)
    if (row[i] > row[best]) best = i;
  return best;
}

std::pair<ValueFunctions, Policy> exact_value_iteration(const TabularMdp& mdp) {
  mdp.validate();
  const int S = mdp.num_states, A = mdp.num_actions, H = mdp.horizon;
  ValueFunctions vf{H, S, A,
                    std::vector<double>(static_cast<std::size_t>(H + 1) * S, 0.0),
                    std::vector<double>(static_cast<std::size_t>(H) * S * A, 0.0)};
  Policy pi{H, S, std::vector<int>(static_cast<std::size_t>(H) * S, 0)};
  for (int h = H - 1; h >= 0; --h) {
    const double* v_next = vf.v.data() + static_cast<std::size_t>(h + 1) * S;
    for (int x = 0; x < S; ++x) {
      double* q_row = vf.q.data() + (static_cast<std::size_t>(h) * S + x) * A;
      for (int a = 0; a < A; ++a) {
        double exp_next = 0.0;
        const auto row = mdp.transition_row(x, a);
        for (int y = 0; y < S; ++y) exp_next += row[y] * v_next[y];
        q_row[a] = mdp.r(x, a) + exp_next;
      }
      const int best = argmax_lowest({q_row, static_cast<std::size_t>(A)});
      pi.action[static_cast<std::size_t>(h) * S + x] = best;
      vf.v[static_cast<std::size_t>(h) * S + x] = q_row[best];
    }
  }
  return {std::move(vf), std::move(pi)};
}

ValueFunctions evaluate_policy(const TabularMdp& mdp, const Policy& policy) {
  mdp.validate();
  const int S = mdp.num_states, A = mdp.num_actions, H = mdp.horizon;
  if (policy.horizon != H || policy.num_states != S)
    fail("evaluate_policy: policy dimensions do not match the MDP");
  for (int idx : policy.action)
    if (idx < 0 || idx >= A) fail("evaluate_policy: action index out of range");
  ValueFunctions vf{H, S, A,
                    std::vector<double>(static_cast<std::size_t>(H + 1) * S, 0.0),
                    std::vector<double>(static_cast<std::size_t>(H) * S * A, 0.0)};
  for (int h = H - 1; h >= 0; --h) {
    const double* v_next = vf.v.data() + static_cast<std::size_t>(h + 1) * S;
    for (int x = 0; x < S; ++x) {
      double* q_row = vf.q.data() + (static_cast<std::size_t>(h) * S + x) * A;
      for (int a = 0; a < A; ++a) {
        double exp_next = 0.0;
        const auto row = mdp.transition_row(x, a);
        for (int y = 0; y < S; ++y) exp_next += row[y] * v_next[y];
        q_row[a] = mdp.r(x, a) + exp_next;
      }
      vf.v[static_cast<std::size_t>(h) * S + x] = q_row[policy.at(h, x)];
    }
  }
  return vf;
}

Policy greedy_from_q(int horizon, int num_states, int num_actions,
                     std::span<const double> q) {
  Policy pi{horizon, num_states,
            std::vector<int>(static_cast<std::size_t>(horizon) * num_states, 0)};
  for (int h = 0; h < horizon; ++h)
    for (int x = 0; x < num_states; ++x) {
      const double* row =
          q.data() + (static_cast<std::size_t>(h) * num_states + x) * num_actions;
      pi.action[static_cast<std::size_t>(h) * num_states + x] =
          argmax_lowest({row, static_cast<std::size_t>(num_actions)});
    }
  return pi;
}

Policy greedy_policy(const ValueFunctions& values) {
  return greedy_from_q(values.horizon, values.num_states, values.num_actions,
                       values.q);
}

std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_mdp(const TabularMdp& mdp, std::ostream& out) {
  mdp.validate();
  out << "tabmdp v1 " << mdp.num_states << ' ' << mdp.num_actions << ' '
      << mdp.horizon << ' ' << mdp.initial_state << '\n';
  for (int x = 0; x < mdp.num_states; ++x)
    for (int a = 0; a < mdp.num_actions; ++a)
      out << "R " << x << ' ' << a << ' ' << format_g17(mdp.r(x, a)) << '\n';
  for (int x = 0; x < mdp.num_states; ++x)
    for (int a = 0; a < mdp.num_actions; ++a)
      for (int y = 0; y < mdp.num_states; ++y)
        out << "P " << x << ' ' << a << ' ' << y << ' '
            << format_g17(mdp.p(x, a, y)) << '\n';
}

TabularMdp read_mdp(std::istream& in) {
  std::string magic, version;
  TabularMdp mdp;
  if (!(in >> magic >> version >> mdp.num_states >> mdp.num_actions >>
        mdp.horizon >> mdp.initial_state) ||
      magic != "tabmdp" || version != "v1")
    fail("read_mdp: expected header 'tabmdp v1 S A H init'");
  if (mdp.num_states < 1 || mdp.num_actions < 1 || mdp.horizon < 1)
    fail("read_mdp: non-positive dimensions in header");
  const std::size_t sa =
      static_cast<std::size_t>(mdp.num_states) * mdp.num_actions;
  mdp.reward.assign(sa, 0.0);
  mdp.transition.assign(sa * mdp.num_states, 0.0);
  std::size_t r_lines = 0, p_lines = 0;
  std::string tag;
  while (in >> tag) {
    int x = 0, a = 0, y = 0;
    double value = 0.0;
    if (tag == "R") {
      if (!(in >> x >> a >> value)) fail("read_mdp: malformed R line");
      if (x < 0 || x >= mdp.num_states || a < 0 || a >= mdp.num_actions)
        fail("read_mdp: R line index out of range");
      mdp.reward[static_cast<std::size_t>(x) * mdp.num_actions + a] = value;
      ++r_lines;
    } else if (tag == "P") {
      if (!(in >> x >> a >> y >> value)) fail("read_mdp: malformed P line");
      if (x < 0 || x >= mdp.num_states || a < 0 || a >= mdp.num_actions ||
          y < 0 || y >= mdp.num_states)
        fail("read_mdp: P line index out of range");
      mdp.transition[(static_cast<std::size_t>(x) * mdp.num_actions + a) *
                         mdp.num_states + y] = value;
      ++p_lines;
    } else {
      fail("read_mdp: unknown line tag '" + tag + "'");
    }
  }
  if (r_lines != sa || p_lines != sa * mdp.num_states)
    fail("read_mdp: wrong number of R/P lines");
  mdp.validate();
  return mdp;
}

void save_mdp(const TabularMdp& mdp, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_mdp: cannot open " + path);
  write_mdp(mdp, out);
  if (!out) throw std::runtime_error("save_mdp: write failed for " + path);
}

TabularMdp load_mdp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_mdp: cannot open " + path);
  return read_mdp(in);
}

}  // namespace ucbvi
