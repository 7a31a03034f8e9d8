// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criterion 1 aggregates the three gradient suites; the others map
// one-to-one onto the verification suites.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "jcas/verify.hpp"

namespace {

struct Criterion {
  int number;
  std::string label;
  bool pass;
  std::string detail;
  double seconds;
};

template <typename Fn>
jcas::SuiteResult timed(Fn&& fn, double& seconds) {
  const auto start = std::chrono::steady_clock::now();
  jcas::SuiteResult res = fn();
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace

int main() {
  using jcas::SuiteResult;
  const jcas::VerifyOptions options;  // full acceptance scale
  std::vector<Criterion> criteria;

  {
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    const SuiteResult w = timed([&] { return jcas::verify_gradient_w(options); }, s1);
    const SuiteResult rf = timed([&] { return jcas::verify_gradient_wrf(options); }, s2);
    const SuiteResult v = timed([&] { return jcas::verify_gradient_v(options); }, s3);
    const double total = s1 + s2 + s3;
    const bool runtime_ok = total < 120.0;
    criteria.push_back({1, "gradient correctness (fd, 1e-4)",
                        w.pass && rf.pass && v.pass && runtime_ok,
                        w.detail + " | " + rf.detail + " | " + v.detail +
                            (runtime_ok ? "" : " | RUNTIME LIMIT EXCEEDED"),
                        total});
  }

  auto add = [&](int number, const std::string& label, SuiteResult (*fn)(const jcas::VerifyOptions&),
                 double limit_s = 0.0) {
    double seconds = 0.0;
    const SuiteResult res = timed([&] { return fn(options); }, seconds);
    const bool runtime_ok = limit_s <= 0.0 || seconds < limit_s;
    criteria.push_back({number, label, res.pass && runtime_ok,
                        res.detail + (runtime_ok ? "" : " | RUNTIME LIMIT EXCEEDED"), seconds});
  };

  add(2, "manifold invariants (1e-9 / 1e-10)", &jcas::verify_manifold_invariants);
  add(3, "closed-form baseband update (1e-8)", &jcas::verify_wbb_closed_form);
  add(4, "penalty sign equivalence (1000 draws)", &jcas::verify_penalty_equivalence);
  add(5, "rcg descent and toy optimum (1e-3)", &jcas::verify_rcg_descent);
  add(6, "admm convergence (5 seeds, <10 min)", &jcas::verify_admm_convergence, 600.0);
  add(7, "ris benefit trend (20 paired seeds)", &jcas::verify_ris_benefit_trend);
  add(8, "monotone trends in K and SNR", &jcas::verify_monotone_trends);
  add(9, "metric plumbing (dft/parseval/oracles)", &jcas::verify_metric_plumbing);
  add(10, "sweep determinism (bit-identical csv)", &jcas::verify_sweep_determinism);

  bool all_pass = true;
  for (const Criterion& c : criteria) {
    all_pass = all_pass && c.pass;
    std::printf("%s criterion %2d: %-42s [%6.1fs] %s\n", c.pass ? "PASS" : "FAIL", c.number,
                c.label.c_str(), c.seconds, c.detail.c_str());
  }
  std::printf("%s\n", all_pass ? "ACCEPTANCE: ALL CRITERIA PASS" : "ACCEPTANCE: FAILURES PRESENT");
  return all_pass ? 0 : 1;
}
