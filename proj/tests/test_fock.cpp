#include <doctest.h>

#include <cmath>
#include <random>

#include "tfdkerr/fock.hpp"

using namespace tfdkerr;

TEST_CASE("identity_vector_examples") {
    const LiouvilleState i2 = identity_vector(FockCutoff(2), 1);
    CHECK(i2.support_size() == 2);
    CHECK(i2.at(DoubledIndex(0, 0)) == Cplx{1.0, 0.0});
    CHECK(i2.at(DoubledIndex(1, 1)) == Cplx{1.0, 0.0});

    const LiouvilleState i1 = identity_vector(FockCutoff(1), 1);
    CHECK(i1.support_size() == 1);
    CHECK(i1.at(DoubledIndex(0, 0)) == Cplx{1.0, 0.0});

    const LiouvilleState i22 = identity_vector(FockCutoff(2), 2);
    CHECK(i22.support_size() == 4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            CHECK(i22.at(DoubledIndex({a, b}, {a, b})) == Cplx{1.0, 0.0});
}

TEST_CASE("ladder_actions") {
    const LadderSet l = ladder_operators(FockCutoff(3), 1, 0);
    LiouvilleState s(1, FockCutoff(3));
    s.set(DoubledIndex(1, 0), 1.0);
    CHECK(l.a.apply(s).at(DoubledIndex(0, 0)) == Cplx{1.0, 0.0});

    LiouvilleState t(1, FockCutoff(3));
    t.set(DoubledIndex(0, 1), 1.0);
    const LiouvilleState raised = l.a_tilde_dag.apply(t);
    CHECK(raised.at(DoubledIndex(0, 2)) == Cplx{std::sqrt(2.0), 0.0});

    // the top row of a^dag is dropped by the truncation convention
    LiouvilleState top(1, FockCutoff(3));
    top.set(DoubledIndex(2, 0), 1.0);
    CHECK(l.a_dag.apply(top).support_size() == 0);
}

TEST_CASE("tilde_and_nontilde_ladders_commute_exactly") {
    const LadderSet l = ladder_operators(FockCutoff(6), 1, 0);
    CHECK((l.a * l.a_tilde - l.a_tilde * l.a).max_abs() == 0.0);
    CHECK((l.a * l.a_tilde_dag - l.a_tilde_dag * l.a).max_abs() == 0.0);
}

TEST_CASE("tilde_conjugation_rules") {
    const LadderSet l = ladder_operators(FockCutoff(5), 1, 0);
    CHECK(l.a.tilde_conjugate().max_abs_difference(l.a_tilde) == 0.0);
    CHECK(l.a_dag.tilde_conjugate().max_abs_difference(l.a_tilde_dag) == 0.0);

    // tilde(i a^dag a) = -i a~^dag a~
    const SparseOperator lhs = (l.a_dag * l.a).scaled(Cplx{0.0, 1.0}).tilde_conjugate();
    const SparseOperator rhs = (l.a_tilde_dag * l.a_tilde).scaled(Cplx{0.0, -1.0});
    CHECK(lhs.max_abs_difference(rhs) == 0.0);

    // involution on a mixed operator
    const SparseOperator x = (l.a_dag * l.a_tilde).scaled(Cplx{0.3, -0.7}) +
                             l.a.scaled(Cplx{0.0, 2.0});
    CHECK(x.tilde_conjugate().tilde_conjugate().max_abs_difference(x) == 0.0);

    // antihomomorphism-up-to-conjugation on products: tilde(XY) = tilde(X) tilde(Y)
    const SparseOperator y = l.a_tilde_dag.scaled(Cplx{1.0, 0.5}) + l.a_dag;
    CHECK((x * y).tilde_conjugate()
              .max_abs_difference(x.tilde_conjugate() * y.tilde_conjugate()) == 0.0);
}

TEST_CASE("identity_reproducing_property_on_random_monomials") {
    // A|I> = tilde(A)^dag |I> on the untruncated space; build the operators on
    // an enlarged register range and compare entries inside the nominal one.
    std::mt19937_64 rng(99);
    for (int cutoff = 2; cutoff <= 10; ++cutoff) {
        const int degree = 3;
        const FockCutoff big(cutoff + degree);
        const LadderSet l = ladder_operators(big, 1, 0);
        const SparseOperator* pick[4] = {&l.a, &l.a_dag, &l.a_tilde, &l.a_tilde_dag};
        for (int rep = 0; rep < 8; ++rep) {
            SparseOperator mono = SparseOperator::identity(1, big);
            for (int k = 0; k < degree; ++k) mono = mono * *pick[rng() % 4];
            const LiouvilleState id = identity_vector(big, 1);
            const LiouvilleState lhs = mono.apply(id);
            const LiouvilleState rhs = mono.tilde_conjugate().adjoint().apply(id);
            double worst = 0.0;
            for (const auto& [idx, v] : lhs.coefficients())
                if (idx.within(FockCutoff(cutoff)))
                    worst = std::max(worst, std::abs(v - rhs.at(idx)));
            for (const auto& [idx, v] : rhs.coefficients())
                if (idx.within(FockCutoff(cutoff)))
                    worst = std::max(worst, std::abs(v - lhs.at(idx)));
            CHECK(worst <= 1e-13);
        }
    }
}

TEST_CASE("expectation_examples") {
    const FockCutoff c40(40);
    const LiouvilleState rho = coherent_state_rho(Cplx{1.0, 0.0}, c40);

    // <1> = trace
    CHECK(std::abs(expectation(SparseOperator::identity(1, c40), rho) - rho.trace()) == 0.0);

    // <a^dag a> on |alpha|^2 = 1: oracle is the direct series sum m e^{-1}/m!
    double series = 0.0, fact = 1.0;
    for (int m = 0; m < 40; ++m) {
        if (m > 0) fact *= m;
        series += m * std::exp(-1.0) / fact;
    }
    const LadderSet l = ladder_operators(c40, 1, 0);
    const Cplx n_expect = expectation(l.a_dag * l.a, rho);
    CHECK(std::abs(n_expect - Cplx{series, 0.0}) <= 1e-12);
    CHECK(std::abs(n_expect - Cplx{1.0, 0.0}) <= 1e-12);

    CHECK(std::abs(expectation(number_operator(c40, 1, 0), number_state_rho(3, c40)) -
                   Cplx{3.0, 0.0}) == 0.0);

    // dimension mismatch is rejected
    CHECK_THROWS_AS(expectation(SparseOperator::identity(1, FockCutoff(5)), rho),
                    std::invalid_argument);
}

TEST_CASE("trace_and_hermiticity_examples") {
    LiouvilleState s(1, FockCutoff(4));
    s.set(DoubledIndex(0, 0), 1.0);
    CHECK(s.trace() == Cplx{1.0, 0.0});

    CHECK(coherent_state_rho(Cplx{0.8, 0.5}, FockCutoff(20)).hermiticity_defect() == 0.0);
    CHECK(number_state_rho(4, FockCutoff(6)).trace() == Cplx{1.0, 0.0});

    LiouvilleState bad(1, FockCutoff(4));
    bad.set(DoubledIndex(1, 0), Cplx{0.0, 0.5});
    bad.set(DoubledIndex(0, 1), Cplx{0.0, 0.5});  // conj would be {0,-0.5}
    CHECK(bad.hermiticity_defect() == 1.0);
}

TEST_CASE("state_constructor_examples") {
    const LiouvilleState vac = coherent_state_rho(Cplx{0.0, 0.0}, FockCutoff(8));
    CHECK(vac.support_size() == 1);
    CHECK(vac.at(DoubledIndex(0, 0)) == Cplx{1.0, 0.0});

    const LiouvilleState th0 = thermal_state_rho(0.0, FockCutoff(8));
    CHECK(th0.support_size() == 1);
    CHECK(th0.at(DoubledIndex(0, 0)) == Cplx{1.0, 0.0});

    const LiouvilleState c1 = coherent_state_rho(Cplx{1.0, 0.0}, FockCutoff(40));
    CHECK(std::abs(c1.at(DoubledIndex(0, 0)) - Cplx{std::exp(-1.0), 0.0}) <= 1e-16);
    CHECK(std::abs(c1.trace() - Cplx{1.0, 0.0}) <= 1e-12);

    // insufficient cutoff reports the neglected weight instead of failing
    double neglected = 0.0;
    (void)coherent_state_rho(Cplx{3.0, 0.0}, FockCutoff(4), &neglected);
    CHECK(neglected > 1e-3);

    double neglected_th = 0.0;
    (void)thermal_state_rho(2.0, FockCutoff(5), 1, &neglected_th);
    CHECK(neglected_th > 1e-3);
}

TEST_CASE("doubled_index_packing_and_order") {
    const DoubledIndex a({3, 1}, {0, 7});
    CHECK(a.m(0) == 3);
    CHECK(a.n(0) == 0);
    CHECK(a.m(1) == 1);
    CHECK(a.n(1) == 7);
    CHECK(a.sector(1) == 8);
    CHECK(!a.is_diagonal());
    CHECK(a.tilde_swapped() == DoubledIndex({0, 7}, {3, 1}));
    CHECK(a.tilde_swapped().tilde_swapped() == a);
    CHECK(a.within(FockCutoff(8)));
    CHECK(!a.within(FockCutoff(7)));
    CHECK(DoubledIndex(0, 0) < DoubledIndex(1, 0));
}

TEST_CASE("state_arithmetic_and_purity") {
    LiouvilleState s(1, FockCutoff(4));
    s.set(DoubledIndex(0, 0), Cplx{0.5, 0.0});
    s.set(DoubledIndex(1, 1), Cplx{0.5, 0.0});
    CHECK(s.purity() == 0.5);
    s *= Cplx{2.0, 0.0};
    CHECK(s.trace() == Cplx{2.0, 0.0});
    LiouvilleState t(1, FockCutoff(4));
    t.set(DoubledIndex(0, 0), Cplx{-1.0, 0.0});
    s += t;
    CHECK(s.at(DoubledIndex(0, 0)) == Cplx{0.0, 0.0});
    s.compress(0.0);
    CHECK(s.support_size() == 1);
}
