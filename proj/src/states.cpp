#include "qse/states.hpp"

#include "qse/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace qse {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kPsdTol = 1e-10;
constexpr double kBlochSlack = 1e-9;
constexpr double kMarginalRankTol = 1e-10;
constexpr double kCompletenessTol = 1e-10;

std::string describe(const char* what, double value) {
    std::ostringstream os;
    os.precision(3);
    os << what << " " << std::scientific << value;
    return os.str();
}

// Kronecker product of two 2x2 matrices.
Mat4c kron(const Mat2c& x, const Mat2c& y) {
    Mat4c out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = x(i, j) * y;
    return out;
}

} // namespace

const std::array<Mat2c, 3>& pauli_matrices() {
    static const std::array<Mat2c, 3> sigma = [] {
        const cplx i{0.0, 1.0};
        std::array<Mat2c, 3> s;
        s[0] << 0, 1, 1, 0;
        s[1] << 0, -i, i, 0;
        s[2] << 1, 0, 0, -1;
        return s;
    }();
    return sigma;
}

namespace {

PauliDecomposition decompose_matrix(const Mat4c& rho) {
    const auto& s = pauli_matrices();
    const Mat2c id = Mat2c::Identity();
    PauliDecomposition d;
    for (int i = 0; i < 3; ++i) {
        d.a(i) = (kron(s[i], id) * rho).trace().real();
        d.b(i) = (kron(id, s[i]) * rho).trace().real();
        for (int j = 0; j < 3; ++j)
            d.T(i, j) = (kron(s[i], s[j]) * rho).trace().real();
    }
    return d;
}

} // namespace

TwoQubitState validate_state(const Mat4c& matrix) {
    if (!matrix.allFinite())
        throw Error(ErrorCode::InvalidInput, "matrix has non-finite entries");

    const double asym = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kHermitianTol)
        throw Error(ErrorCode::NotHermitian, describe("max |M - M^dagger| =", asym), asym);
    const Mat4c herm = 0.5 * (matrix + matrix.adjoint());

    const double trace_err = std::abs(herm.trace().real() - 1.0);
    if (trace_err > kTraceTol)
        throw Error(ErrorCode::NotUnitTrace, describe("|Tr M - 1| =", trace_err), trace_err);

    Eigen::SelfAdjointEigenSolver<Mat4c> es(herm, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues()(0);
    if (min_eig < -kPsdTol)
        throw Error(ErrorCode::NotPositive, describe("smallest eigenvalue", min_eig), min_eig);

    return TwoQubitState(herm, decompose_matrix(herm));
}

Mat4c PauliDecomposition::reassemble() const {
    const auto& s = pauli_matrices();
    const Mat2c id = Mat2c::Identity();
    Mat4c m = kron(id, id);
    for (int i = 0; i < 3; ++i) {
        m += a(i) * kron(s[i], id);
        m += b(i) * kron(id, s[i]);
        for (int j = 0; j < 3; ++j)
            m += T(i, j) * kron(s[i], s[j]);
    }
    return 0.25 * m;
}

double PauliDecomposition::purity() const {
    return 0.25 * (1.0 + a.squaredNorm() + b.squaredNorm() + T.squaredNorm());
}

PauliDecomposition pauli_decompose(const TwoQubitState& state) {
    return state.pauli();
}

TwoQubitState state_from_pauli(const PauliDecomposition& decomp) {
    if (!decomp.a.allFinite() || !decomp.b.allFinite() || !decomp.T.allFinite())
        throw Error(ErrorCode::InvalidInput, "Pauli coefficients must be finite");
    const TwoQubitState checked = validate_state(decomp.reassemble());
    return TwoQubitState(checked.matrix(), decomp);
}

Mat2c qubit_matrix(const Vec3& v) {
    const auto& s = pauli_matrices();
    return 0.5 * (Mat2c::Identity() + v(0) * s[0] + v(1) * s[1] + v(2) * s[2]);
}

Vec3 bloch_vector(const Mat2c& m) {
    const auto& s = pauli_matrices();
    return {(s[0] * m).trace().real(), (s[1] * m).trace().real(), (s[2] * m).trace().real()};
}

Mat2c projector(const Vec3& n) { return qubit_matrix(n.normalized()); }

QubitState QubitState::from_matrix(const Mat2c& m) {
    if (!m.allFinite())
        throw Error(ErrorCode::InvalidInput, "qubit matrix has non-finite entries");
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kHermitianTol)
        throw Error(ErrorCode::NotHermitian, describe("max |M - M^dagger| =", asym), asym);
    const Mat2c herm = 0.5 * (m + m.adjoint());
    const double trace_err = std::abs(herm.trace().real() - 1.0);
    if (trace_err > kTraceTol)
        throw Error(ErrorCode::NotUnitTrace, describe("|Tr M - 1| =", trace_err), trace_err);
    const Vec3 v = bloch_vector(herm);
    // Eigenvalues of a unit-trace qubit matrix are (1 +- |v|)/2.
    const double min_eig = 0.5 * (1.0 - v.norm());
    if (min_eig < -kPsdTol)
        throw Error(ErrorCode::NotPositive, describe("smallest eigenvalue", min_eig), min_eig);
    return QubitState(herm, v);
}

QubitState QubitState::from_bloch(const Vec3& v) {
    if (!v.allFinite())
        throw Error(ErrorCode::InvalidInput, "Bloch vector has non-finite entries");
    const double r = v.norm();
    if (r > 1.0 + kBlochSlack)
        throw Error(ErrorCode::NotPositive, describe("Bloch vector norm", r), r);
    const Vec3 w = r > 1.0 ? Vec3(v / r) : v;
    return QubitState(qubit_matrix(w), w);
}

QubitState reduced_state(const TwoQubitState& state, Party party) {
    const Mat4c& rho = state.matrix();
    Mat2c out = Mat2c::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                out(i, j) += party == Party::Alice ? rho(2 * i + k, 2 * j + k)
                                                   : rho(2 * k + i, 2 * k + j);
    return QubitState::from_matrix(out);
}

TwoQubitState swap_parties(const TwoQubitState& state) {
    Eigen::PermutationMatrix<4> perm;
    perm.indices() << 0, 2, 1, 3;
    const TwoQubitState moved = validate_state(perm * state.matrix() * perm.transpose());
    return TwoQubitState(moved.matrix(), state.pauli().swapped());
}

Mat4c partial_transpose(const Mat4c& m) {
    Mat4c out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    out(2 * i + j, 2 * k + l) = m(2 * i + l, 2 * k + j);
    return out;
}

PptResult is_entangled_ppt(const TwoQubitState& state) {
    PauliDecomposition flipped = state.pauli();
    flipped.b(1) = -flipped.b(1);
    flipped.T.col(1) = -flipped.T.col(1);
    Eigen::SelfAdjointEigenSolver<Mat4c> es(flipped.reassemble(), Eigen::EigenvaluesOnly);
    const Eigen::Vector4d ev = es.eigenvalues();
    PptResult r;
    r.min_eigenvalue = ev(0);
    r.entangled = ev(0) < -kPsdTol;
    for (int i = 0; i < 4; ++i)
        if (ev(i) < 0.0) r.negativity -= ev(i);
    return r;
}

double global_purity(const TwoQubitState& state) {
    return state.pauli().purity();
}

std::vector<std::vector<Mat2c>>
steering_equivalent_observables(std::span<const SettingEnsemble> assemblage,
                                const QubitState& rho_b) {
    Eigen::SelfAdjointEigenSolver<Mat2c> es(rho_b.matrix());
    const Eigen::Vector2d ev = es.eigenvalues();
    if (ev(0) <= kMarginalRankTol)
        throw Error(ErrorCode::SingularMarginal, describe("smallest marginal eigenvalue", ev(0)),
                    ev(0));
    const Mat2c inv_sqrt = es.eigenvectors() *
                           ev.cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() *
                           es.eigenvectors().adjoint();

    std::vector<std::vector<Mat2c>> out;
    out.reserve(assemblage.size());
    for (const auto& setting : assemblage) {
        Mat2c total = Mat2c::Zero();
        std::vector<Mat2c> effects;
        effects.reserve(setting.size());
        for (const auto& el : setting) {
            if (!(el.probability >= 0.0 && el.probability <= 1.0))
                throw Error(ErrorCode::InvalidInput, "outcome probability outside [0, 1]");
            const Mat2c sigma = el.probability * el.state.matrix();
            total += sigma;
            Mat2c b = inv_sqrt * sigma * inv_sqrt;
            effects.push_back(0.5 * (b + b.adjoint()));
        }
        const double mismatch = (total - rho_b.matrix()).cwiseAbs().maxCoeff();
        if (mismatch > kCompletenessTol)
            throw Error(ErrorCode::InvalidInput,
                        describe("setting does not sum to the marginal; deviation", mismatch),
                        mismatch);
        out.push_back(std::move(effects));
    }
    return out;
}

TwoQubitState random_ginibre_state(std::mt19937_64& rng, int rank) {
    if (rank < 1 || rank > 4)
        throw Error(ErrorCode::OutOfRange, "Ginibre rank must be in 1..4");
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::Matrix<cplx, 4, Eigen::Dynamic> g(4, rank);
    for (int j = 0; j < rank; ++j)
        for (int i = 0; i < 4; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = cplx(re, im);
        }
    Mat4c rho = g * g.adjoint();
    rho /= rho.trace().real();
    return validate_state(0.5 * (rho + rho.adjoint()));
}

} // namespace qse
