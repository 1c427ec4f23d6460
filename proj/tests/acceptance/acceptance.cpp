// Acceptance criteria AC1-AC10. Prints one [PASS]/[FAIL] line per criterion.
//   acceptance                 run all
//   acceptance --criterion N   run one

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qcensor/demos.hpp"
#include "qcensor/verify.hpp"

using namespace qcensor;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string violations;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      violations += " [violated: " + what + "]";
    }
  }
};

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

Matrix pure(const Vector& v) { return v * v.adjoint(); }

// |+−⟩⟨+−| written out entrywise: (1/4)·s_i·s_j with signs (+,−,+,−).
Matrix plus_minus_oracle() {
  const double s[] = {1, -1, 1, -1};
  Matrix m(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = 0.25 * s[i] * s[j];
  return m;
}

void ac1(Outcome& o) {
  Vector hhvv = Vector::Zero(4);
  hhvv(0) = hhvv(3) = 1.0 / std::sqrt(2.0);
  const DensityOperator bell(pure(hhvv), DimSignature{2, 2});
  const double h = 1.0 / std::sqrt(2.0);
  Vector a(2), b(2);
  a << h, h;
  b << h, -h;
  const ProductEnsemble claim = {{1.0, {a, b}}};
  const Matrix target = plus_minus_oracle();

  NetworkScenario sc;
  sc.theory = Theory::entanglement;
  sc.strategies = {untruthful_sender(bell, encode_description(claim))};
  const double dev_bell = max_abs_diff(run_protocol(sc).receiver_state.matrix(), target);
  sc.strategies = {honest_sender(claim)};
  const double dev_honest = max_abs_diff(run_protocol(sc).receiver_state.matrix(), target);
  o.require(dev_bell <= 1e-12, "Bell input replaced by |+-><+-|");
  o.require(dev_honest <= 1e-12, "honest |+-> unchanged");
  o.detail << "max deviation: Bell input " << sci(dev_bell) << ", honest input " << sci(dev_honest);
}

void ac2(Outcome& o) {
  const double eps = 1e-6;
  const auto below = is_free_entanglement(isotropic(2, 1.0 / 3.0 - eps));
  const auto above = is_free_entanglement(isotropic(2, 1.0 / 3.0 + eps));
  o.require(below.is_free, "p = 1/3 - 1e-6 separable");
  o.require(!above.is_free, "p = 1/3 + 1e-6 entangled");
  auto f = [](double p) { return is_free_entanglement(isotropic(2, p)).witness_value; };
  double lo = 0.2, hi = 0.5;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) >= 0.0 ? lo : hi) = mid;
  }
  const double root = 0.5 * (lo + hi);
  o.require(std::abs(root - 1.0 / 3.0) <= 1e-9, "zero crossing at p = 1/3");
  o.require(std::abs(f(1.0 / 3.0)) <= 1e-9, "min PT eigenvalue vanishes at p = 1/3");
  o.detail << "min PT eigenvalue " << sci(below.witness_value) << " / " << sci(above.witness_value)
           << " at 1/3 -/+ 1e-6, crossing at " << sci(root - 1.0 / 3.0) << " from 1/3";
}

void ac3(Outcome& o) {
  const auto sigma = isotropic(2, 1.0 / 3.0);
  const auto branch = make_branch(describe_state(Theory::entanglement, sigma), ChannelKind::eigen_dephasing);
  Vector phi = Vector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  const double dev = max_abs_diff(branch.apply(pure(phi)), pure(phi));
  const auto r = smuggle_eigenstate_demo();
  const double w = r.verdicts.at(0).verdict.witness_value;
  o.require(dev <= 1e-10, "branch maps phi+ to itself");
  o.require(std::abs(w + 0.5) <= 1e-9, "receiver PT witness -1/2");
  o.require(r.breach, "breach flagged");
  bool rejected = false;
  try {
    (void)ConditionalRDChannel(Theory::entanglement, ChannelKind::eigen_dephasing);
  } catch (const DomainError&) {
    rejected = true;
  }
  o.require(rejected, "eigen_dephasing rejected for entanglement");
  o.detail << "max |branch(phi+) - phi+| " << sci(dev) << ", witness " << w;
}

void report_suite(Outcome& o, const SuiteResult& r) {
  o.require(r.passed(), r.suite + " suite");
  o.detail << r.suite << " (" << r.samples << " samples):";
  for (const auto& c : r.checks) {
    o.detail << " " << c.name << " " << sci(c.observed) << (c.upper ? " <= " : " >= ") << sci(c.bound) << ";";
    if (!c.passed()) o.detail << " VIOLATED;";
  }
}

void ac4(Outcome& o) { report_suite(o, verify_affine_unbreakable(200, kSeed)); }
void ac5(Outcome& o) { report_suite(o, verify_convex_unbreakable(200, kSeed)); }

int cli_exit(const std::string& args) {
  const std::string cmd = std::string("\"") + QCENSOR_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void ac6(Outcome& o) {
  const Matrix s0 = pure(kron_ket(basis_ket(2, 0), basis_ket(2, 0)));
  const Matrix s1 = pure(kron_ket(plus_ket(), basis_ket(2, 1)));
  const auto r = run_protocol(discord_breach_scenario());
  const double intact = max_abs_diff(r.receiver_state.matrix(), 0.5 * s0 + 0.5 * s1);
  const double dq = discord(r.receiver_state, 0);
  const double d0 = discord(DensityOperator(s0, DimSignature{2, 2}), 0);
  const double d1 = discord(DensityOperator(s1, DimSignature{2, 2}), 0);
  const int code = cli_exit(std::string("run --scenario \"") + QCENSOR_SCENARIO_DIR + "/discord_breach.json\"");
  o.require(intact <= 1e-12, "mixture passes intact");
  o.require(dq > 1e-3, "receiver discord > 1e-3");
  o.require(d0 <= 1e-6 && d1 <= 1e-6, "component discord <= 1e-6");
  o.require(r.breach, "breach flag");
  o.require(code == 3, "CLI exit code 3");
  o.detail << "deviation " << sci(intact) << ", discord " << dq << " nats, components " << sci(d0) << ", " << sci(d1)
           << ", CLI exit " << code;
}

void ac7(Outcome& o) {
  const auto w = isotropic_local_range(2);
  o.require(w.lower_exact && w.upper_exact && *w.lower_exact == Rational::make(1, 3) && *w.upper_exact == Rational::make(5, 12),
            "window (1/3, 5/12) exact");
  o.require(std::abs(w.lower - 1.0 / 3.0) <= 1e-12 && std::abs(w.upper - 5.0 / 12.0) <= 1e-12, "window as doubles");
  const auto sigma = isotropic(2, 5.0 / 12.0);
  const auto ppt = is_free_entanglement(sigma);
  const double m = chsh_parameter(sigma);
  o.require(!ppt.is_free, "isotropic(2, 5/12) NPT");
  o.require(std::abs(m - 25.0 / 72.0) <= 1e-9 && m < 1.0, "M = 25/72 < 1");
  NetworkScenario sc;
  sc.theory = Theory::locality;
  sc.strategies = {honest_sender(Theory::locality, sigma, ChannelKind::replacement),
                   honest_sender(Theory::locality, sigma, ChannelKind::replacement)};
  const auto r = run_protocol(sc);
  double marg = 0.0;
  for (std::size_t k = 0; k < 2; ++k) {
    const std::size_t keep[] = {2 * k, 2 * k + 1};
    marg = std::max(marg, max_abs_diff(partial_trace(r.receiver_state.matrix(), r.receiver_state.signature(), keep), sigma.matrix()));
  }
  o.require(marg <= 1e-10, "receiver marginals equal sigma");
  o.require(!r.breach && r.activation_risk, "passes censorship, activation risk flagged");
  o.detail << "window (" << w.lower_exact->str() << ", " << w.upper_exact->str() << "), PT eigenvalue " << ppt.witness_value
           << ", M " << m << ", marginal deviation " << sci(marg);
}

void ac8(Outcome& o) {
  const LinearMap map = imaginarity_rd_map(2);
  const auto eig = hermitian_eigenvalues(choi(map).matrix);
  // Independent route: Σ_ij Λ(|i⟩⟨j|) ⊗ |i⟩⟨j| with Λ(X) = (X + Xᵀ)/2 written out.
  Matrix c = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Matrix e = Matrix::Zero(2, 2);
      e(i, j) = 1.0;
      c += kron(Matrix(0.5 * (e + e.transpose())), e);
    }
  Eigen::ComplexEigenSolver<Matrix> ces(c);
  double oracle_min = ces.eigenvalues().real().minCoeff();
  const double lib_min = eig.minCoeff();
  o.require(std::abs(lib_min - oracle_min) <= 1e-12, "library and direct Choi agree");
  o.require(std::abs(lib_min - (-1.0)) <= 1e-9, "Choi eigenvalue -1");

  Rng rng(kSeed);
  double worst_imag = 0.0, worst_valid = 0.0;
  for (int s = 0; s < 200; ++s) {
    const auto rho = random_density(2, 1 + rng.below(2), rng);
    const Matrix out = map.apply(rho.matrix());
    worst_imag = std::max(worst_imag, out.imag().cwiseAbs().maxCoeff());
    const auto v = validate(out);
    if (!v.valid()) worst_valid = std::max({worst_valid, v.hermiticity_defect, v.trace_deviation, -v.min_eigenvalue, 1.0});
  }
  o.require(worst_imag <= 1e-12 && worst_valid <= 1e-10, "outputs are valid real states");
  o.detail << "Choi eigenvalues {";
  for (Eigen::Index i = 0; i < eig.size(); ++i) o.detail << (i ? ", " : "") << eig(i);
  o.detail << "}, min " << lib_min << " (direct " << oracle_min << "), max |Im| of outputs " << sci(worst_imag);
}

void ac9(Outcome& o) {
  Rng rng(kSeed);
  double worst = -1.0;
  std::size_t cases = 0;
  for (int s = 0; s < 100; ++s) {
    const auto sigma = random_real_density(DimSignature{2}, 1 + rng.below(2), rng);
    const auto branch = make_branch(encode_description(Theory::imaginarity, sigma), ChannelKind::eigen_dephasing);
    for (double gamma : {0.1, 0.5, 0.9}) {
      const auto d = noise_comparison(Theory::imaginarity, sigma, amplitude_damping(gamma), branch, kSeed + s);
      worst = std::max(worst, d.d_censored - d.d_noisy);
      ++cases;
    }
  }
  o.require(worst <= 1e-12, "d_censored <= d_noisy + 1e-12");
  o.detail << cases << " cases, max (d_censored - d_noisy) " << sci(worst);
}

void ac10(Outcome& o) { report_suite(o, verify_channel_axioms(100, kSeed)); }

const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> kCriteria = {
    {"Bell filter", ac1},
    {"isotropic separability boundary", ac2},
    {"eigenbasis smuggle", ac3},
    {"affine unbreakability suite", ac4},
    {"convex unbreakability suite", ac5},
    {"discord breach", ac6},
    {"locality window and activation", ac7},
    {"non-CP certificate of the imaginarity map", ac8},
    {"noise comparison", ac9},
    {"channel axioms suite", ac10},
};

bool run_criterion(std::size_t n) {
  Outcome o;
  try {
    kCriteria[n - 1].second(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.violations += std::string(" [exception: ") + e.what() + "]";
  }
  std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << "AC" << n << " " << kCriteria[n - 1].first << ": " << o.detail.str() << o.violations
            << std::endl;
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 3 && std::string(argv[1]) == "--criterion") {
    const long n = std::strtol(argv[2], nullptr, 10);
    if (n < 1 || n > static_cast<long>(kCriteria.size())) {
      std::cerr << "criterion must be 1.." << kCriteria.size() << "\n";
      return 2;
    }
    return run_criterion(static_cast<std::size_t>(n)) ? 0 : 1;
  }
  if (argc != 1) {
    std::cerr << "usage: acceptance [--criterion N]\n";
    return 2;
  }
  bool all = true;
  for (std::size_t n = 1; n <= kCriteria.size(); ++n) all = run_criterion(n) && all;
  return all ? 0 : 1;
}
