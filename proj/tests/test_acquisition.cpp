#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "qgi/acquisition.hpp"

using namespace qgi;

namespace {

ComplexField flat(long d) { return ComplexField::Constant(d, d, Complex(1.0 / d)); }

ComplexField slit4() {
    ObjectSpec s;
    s.kind = ObjectKind::pi_slit_phase;
    s.illumination_radius = 10.0;
    return normalize(make_object(s, 4));
}

// |<T_j|O>|^2 summed pixel by pixel from the oracle masks.
double naive_value(const ComplexField& o, long j, ProjectionKind kind) {
    const long d = o.rows();
    const Eigen::MatrixXd rows = oracle::sylvester(d);
    const RealField mj = oracle::mask(j, rows), m0 = oracle::mask(0, rows);
    const Complex ref = kind == ProjectionKind::cos ? Complex(1.0) : Complex(0.0, 1.0);
    Complex acc = 0.0;
    for (long r = 0; r < d; ++r)
        for (long c = 0; c < d; ++c) acc += std::conj((mj(r, c) + ref * m0(r, c)) / std::sqrt(2.0)) * o(r, c);
    return std::norm(acc);
}

}  // namespace

TEST_CASE("flat object series") {
    const MeasurementSeries c = measure_exact(flat(4), BasisSpec::hadamard(4), ProjectionKind::cos);
    CHECK(c.count() == 16);
    CHECK(c.exact());
    CHECK(c.values[0] == doctest::Approx(2.0).epsilon(1e-14));
    for (long j = 1; j < 16; ++j) CHECK(c.values[j] == doctest::Approx(0.5).epsilon(1e-14));

    const MeasurementSeries s = measure_exact(flat(4), BasisSpec::hadamard(4), ProjectionKind::sin);
    CHECK(s.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    for (long j = 1; j < 16; ++j) CHECK(s.values[j] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("4x4 pi slit matches brute force, both kinds") {
    const ComplexField o = slit4();
    for (ProjectionKind k : {ProjectionKind::cos, ProjectionKind::sin}) {
        const MeasurementSeries s = measure_exact(o, BasisSpec::hadamard(4), k);
        for (long j = 0; j < 16; ++j) CHECK(std::abs(s.values[j] - naive_value(o, j, k)) < 1e-12);
    }
}

TEST_CASE("cos series at j=0 is twice p0") {
    const ComplexField o = normalize(oracle::random_complex(8, 31));
    const SpectralDecomposition dec = decompose(o, hadamard_matrix(8));
    const MeasurementSeries c = measure_exact(o, BasisSpec::hadamard(8), ProjectionKind::cos);
    CHECK(c.values[0] == doctest::Approx(2.0 * dec.p(0)).epsilon(1e-12));
    CHECK((c.values.array() >= 0.0).all());
}

TEST_CASE("fast path equals per-mask path") {
    for (long d : {1, 2, 4, 8, 16}) {
        for (const BasisSpec& b : {BasisSpec::hadamard(d), BasisSpec::hadamard(d, Ordering::sequency)}) {
            const ComplexField o = normalize(oracle::random_complex(d, 40 + d));
            for (ProjectionKind k : {ProjectionKind::cos, ProjectionKind::sin}) {
                const MeasurementSeries fast = measure_exact(o, b, k);
                const MeasurementSeries slow = measure_per_mask(o, b, k);
                CHECK((fast.values - slow.values).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }
    const ComplexField o = normalize(oracle::random_complex(8, 2));
    const BasisSpec rb = BasisSpec::random(8, 4);
    CHECK((measure_exact(o, rb, ProjectionKind::sin).values - measure_per_mask(o, rb, ProjectionKind::sin).values)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("measurement preconditions") {
    CHECK_THROWS_AS(measure_exact(flat(4), BasisSpec::hadamard(8), ProjectionKind::cos), DimensionError);
    CHECK_THROWS_AS(measure_exact(2.0 * flat(4), BasisSpec::hadamard(4), ProjectionKind::cos), DataError);
}

TEST_CASE("probability decomposition") {
    const OrthoMatrix h = hadamard_matrix(8);
    SUBCASE("flat object and a global phase have zero residual") {
        for (Complex g : {Complex(1.0), Complex(0.0, 1.0)}) {
            const ComplexField o = flat(8) * g;
            for (ProjectionKind k : {ProjectionKind::cos, ProjectionKind::sin}) {
                const ResidualReport r = decompose_probability(measure_exact(o, BasisSpec::hadamard(8), k), decompose(o, h));
                CHECK(r.max_abs_residual < 1e-15);
            }
        }
    }
    SUBCASE("random objects: standard convention holds, alternatives fail") {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const ComplexField o = normalize(oracle::random_complex(8, seed));
            const SpectralDecomposition dec = decompose(o, h);
            for (ProjectionKind k : {ProjectionKind::cos, ProjectionKind::sin}) {
                const MeasurementSeries s = measure_exact(o, BasisSpec::hadamard(8), k);
                CHECK(decompose_probability(s, dec).max_abs_residual < 1e-10);
                ProbabilityConvention sum_phase;
                sum_phase.phase_difference = false;
                CHECK(decompose_probability(s, dec, sum_phase).max_abs_residual > 1e-3);
            }
            ProbabilityConvention plus_sin;
            plus_sin.sine_cross_sign = +1.0;
            ProbabilityConvention full_pj;
            full_pj.sine_pj_coefficient = 1.0;
            const MeasurementSeries s = measure_exact(o, BasisSpec::hadamard(8), ProjectionKind::sin);
            CHECK(decompose_probability(s, dec, plus_sin).max_abs_residual > 1e-3);
            CHECK(decompose_probability(s, dec, full_pj).max_abs_residual > 1e-3);
        }
    }
    SUBCASE("needs an exact series") {
        const ComplexField o = flat(4);
        const MeasurementSeries s = sample_counts(measure_exact(o, BasisSpec::hadamard(4), ProjectionKind::cos), 100, 1);
        CHECK_THROWS_AS(decompose_probability(s, decompose(o, hadamard_matrix(4))), DataError);
    }
}

TEST_CASE("series mean agrees with the term expansion") {
    // <v> = (1/N) sum_j (p0/2 + pj/2 + sqrt(p0 pj) cos(dα_j)), the j=0 term contributing 2 p0.
    const ComplexField o = normalize(oracle::random_complex(16, 8));
    const SpectralDecomposition dec = decompose(o, hadamard_matrix(16));
    const MeasurementSeries c = measure_exact(o, BasisSpec::hadamard(16), ProjectionKind::cos);
    const long n = 256;
    double expected = 2.0 * dec.p(0);
    for (long j = 1; j < n; ++j)
        expected += dec.p(0) / 2 + dec.p(j) / 2 + std::sqrt(dec.p(0) * dec.p(j)) * std::cos(dec.alpha(j) - dec.alpha(0));
    CHECK(std::abs(series_mean(c) - expected / n) < 1e-12);
}

TEST_CASE("Poisson sampling") {
    const ComplexField o = slit4();
    const MeasurementSeries exact = measure_exact(o, BasisSpec::hadamard(4), ProjectionKind::cos);

    SUBCASE("metadata and determinism") {
        const MeasurementSeries a = sample_counts(exact, 1e4, 7);
        const MeasurementSeries b = sample_counts(exact, 1e4, 7);
        const MeasurementSeries c = sample_counts(exact, 1e4, 8);
        CHECK(a.values == b.values);
        CHECK(a.values != c.values);
        CHECK(a.flux == 1e4);
        CHECK(a.seed == 7u);
        CHECK(a.kind == exact.kind);
        CHECK(a.basis == exact.basis);
        CHECK((a.values.array() == a.values.array().round()).all());
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(sample_counts(exact, 0.0, 1), SpecError);
        CHECK_THROWS_AS(sample_counts(exact, -5.0, 1), SpecError);
        CHECK_THROWS_AS(sample_counts(sample_counts(exact, 10, 1), 10, 1), DataError);
    }
    SUBCASE("large flux converges to the normalized probabilities") {
        // Every bin of the 2x2 flat series holds >= 1.4e7 expected counts, so 1e-3 is a ~4 sigma bound.
        for (ProjectionKind k : {ProjectionKind::cos, ProjectionKind::sin}) {
            const MeasurementSeries e = measure_exact(flat(2), BasisSpec::hadamard(2), k);
            const MeasurementSeries s = sample_counts(e, 1e8, 3);
            const Eigen::VectorXd p = e.values / e.values.sum();
            const Eigen::VectorXd q = s.values / s.values.sum();
            for (long j = 0; j < p.size(); ++j)
                if (p[j] > 0) CHECK(std::abs(q[j] - p[j]) / p[j] < 1e-3);
        }
        // Larger grids spread the flux thinner; the bound scales as 1/sqrt(expected counts).
        const MeasurementSeries e = measure_exact(normalize(oracle::random_complex(8, 77)), BasisSpec::hadamard(8),
                                                  ProjectionKind::sin);
        const MeasurementSeries s = sample_counts(e, 1e8, 3);
        const Eigen::VectorXd p = e.values / e.values.sum();
        const Eigen::VectorXd q = s.values / s.values.sum();
        for (long j = 0; j < p.size(); ++j)
            if (p[j] > 0) CHECK(std::abs(q[j] - p[j]) / p[j] < 5.0 / std::sqrt(1e8 * p[j]));
    }
    SUBCASE("unbiased: mean of 100 series within 3 sigma per bin") {
        const double flux = 1e6;
        const Eigen::VectorXd mean_exact = flux * exact.values / exact.values.sum();
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(exact.count());
        for (std::uint64_t seed = 0; seed < 100; ++seed) acc += sample_counts(exact, flux, 1000 + seed).values;
        acc /= 100.0;
        for (long j = 0; j < exact.count(); ++j) {
            const double sigma = std::sqrt(mean_exact[j] / 100.0);
            CHECK(std::abs(acc[j] - mean_exact[j]) <= 3.0 * sigma + 1e-12);
        }
    }
    SUBCASE("dark counts add a uniform rate") {
        const MeasurementSeries dark = sample_counts(exact, 1e6, 5, 1e5);
        const MeasurementSeries none = sample_counts(exact, 1e6, 5);
        CHECK(dark.dark_rate == 1e5);
        CHECK(dark.values.mean() > none.values.mean() + 0.9e5);
    }
}
