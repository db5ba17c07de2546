import numpy as np
import pytest

from conecert import (
    FarkasOutcome,
    FarkasTag,
    FarkasVerification,
    farkas_alternative,
    generalized_farkas,
    verify_outcome,
)


class TestFarkasAlternative:
    def test_identity_system1(self):
        out = farkas_alternative(np.eye(2), [1.0, 1.0])
        assert out.tag is FarkasTag.SYSTEM1
        assert np.allclose(out.y, [1.0, 1.0], atol=1e-12)
        assert verify_outcome(np.eye(2), [1.0, 1.0], out)

    def test_identity_system2(self):
        out = farkas_alternative(np.eye(2), [-1.0, 0.0])
        assert out.tag is FarkasTag.SYSTEM2
        assert np.allclose(out.x, [-1.0, 0.0], atol=1e-12)
        assert verify_outcome(np.eye(2), [-1.0, 0.0], out)

    def test_two_row_system1(self):
        A = np.array([[0.0, -1.0], [1.0, 1.0]])
        out = farkas_alternative(A, [2.0, 1.0])
        assert out.tag is FarkasTag.SYSTEM1
        assert np.allclose(out.y, [1.0, 2.0], atol=1e-10)

    def test_system2_witness_structure(self):
        # complementarity of the construction: <y*, A x> = 0 where y* is
        # the multiplier vector behind the witness
        rng = np.random.default_rng(73)
        seen = 0
        while seen < 50:
            m = int(rng.integers(1, 7))
            n = int(rng.integers(1, 7))
            A = rng.standard_normal((m, n))
            b = rng.standard_normal(n)
            out = farkas_alternative(A, b)
            if out.tag is not FarkasTag.SYSTEM2:
                continue
            seen += 1
            from conecert import nnls

            rho = nnls(A.T, b).rho
            assert abs(float(rho @ (A @ out.x))) <= 1e-9 * (1.0 + np.linalg.norm(b) ** 2)
            assert float(b @ out.x) >= 0.5 * float(out.x @ out.x)

    def test_exclusivity_random(self):
        rng = np.random.default_rng(79)
        both = neither = 0
        for _ in range(300):
            m = int(rng.integers(1, 7))
            n = int(rng.integers(1, 7))
            A = rng.standard_normal((m, n))
            b = rng.standard_normal(n)
            out = farkas_alternative(A, b)
            from conecert import nnls

            sol = nnls(A.T, b)
            cand1 = FarkasOutcome(FarkasTag.SYSTEM1, y=sol.rho, x=None,
                                  verification=FarkasVerification(0.0, 0.0, 0.0))
            cand2 = FarkasOutcome(FarkasTag.SYSTEM2, y=None, x=sol.residual,
                                  verification=FarkasVerification(0.0, 0.0, 0.0))
            ok1 = verify_outcome(A, b, cand1, tol=1e-7)
            ok2 = verify_outcome(A, b, cand2, tol=1e-7)
            if ok1 and ok2:
                both += 1
            if not ok1 and not ok2:
                neither += 1
            assert verify_outcome(A, b, out, tol=1e-7)
        assert both == 0
        assert neither == 0


class TestVerifyOutcome:
    def test_valid_certificate(self):
        out = farkas_alternative(np.eye(3), [1.0, 2.0, 3.0])
        assert verify_outcome(np.eye(3), [1.0, 2.0, 3.0], out)

    def test_zero_inner_product_rejected(self):
        # a "witness" orthogonal to b violates the strict inequality
        A = np.array([[1.0, 0.0]])
        b = np.array([0.0, 1.0])
        fake = FarkasOutcome(FarkasTag.SYSTEM2, y=None, x=np.array([-1.0, 0.0]),
                             verification=FarkasVerification(0.0, 0.0, 0.0))
        assert not verify_outcome(A, b, fake)

    def test_zero_witness_rejected(self):
        fake = FarkasOutcome(FarkasTag.SYSTEM2, y=None, x=np.zeros(2),
                             verification=FarkasVerification(0.0, 0.0, 0.0))
        assert not verify_outcome(np.eye(2), [1.0, 1.0], fake)

    def test_swapped_tag_rejected(self):
        out = farkas_alternative(np.eye(2), [1.0, 1.0])
        swapped = FarkasOutcome(FarkasTag.SYSTEM2, y=None, x=out.y,
                                verification=out.verification)
        assert not verify_outcome(np.eye(2), [1.0, 1.0], swapped)

    def test_negative_multiplier_rejected(self):
        fake = FarkasOutcome(FarkasTag.SYSTEM1, y=np.array([-1.0, 2.0]), x=None,
                             verification=FarkasVerification(0.0, 0.0, 0.0))
        assert not verify_outcome(np.eye(2), [-1.0, 2.0], fake)


class TestGeneralizedFarkas:
    def test_ray_scaling(self):
        report = generalized_farkas([(np.array([1.0, 0.0]), 1.0)], [2.0, 0.0], 2.0)
        assert report.member_plain
        assert report.member_augmented
        assert report.hypothesis_verified

    def test_augmentation_needed(self):
        report = generalized_farkas([(np.array([1.0, 0.0]), 0.0)], [1.0, 0.0], 1.0)
        assert not report.member_plain
        assert report.member_augmented

    def test_violating_feasible_point_found(self):
        report = generalized_farkas([(np.array([1.0, 0.0]), 1.0)], [-1.0, 0.0], -2.0)
        assert not report.member_plain
        assert not report.member_augmented
        assert report.hypothesis_verified
        assert not report.sampled_implication_holds

    def test_membership_monotone_random(self):
        rng = np.random.default_rng(83)
        for _ in range(100):
            n = int(rng.integers(1, 5))
            k = int(rng.integers(1, 5))
            pairs = [(rng.standard_normal(n), float(rng.standard_normal())) for _ in range(k)]
            b = rng.standard_normal(n)
            r = float(rng.standard_normal())
            report = generalized_farkas(pairs, b, r, seed=5)
            assert (not report.member_plain) or report.member_augmented

    def test_member_implies_sampled_holds(self):
        # (b, r) in the augmented cone means the implication is a theorem;
        # the sampled spot-check must agree
        rng = np.random.default_rng(89)
        checked = 0
        while checked < 30:
            n = int(rng.integers(1, 4))
            k = int(rng.integers(1, 4))
            pairs = [(rng.standard_normal(n), float(rng.uniform(0.1, 2.0))) for _ in range(k)]
            weights = rng.uniform(0.0, 2.0, size=k)
            b = sum(w * s for w, (s, _) in zip(weights, pairs))
            r = float(sum(w * p for w, (_, p) in zip(weights, pairs)) + rng.uniform(0.0, 1.0))
            report = generalized_farkas(pairs, np.asarray(b), r, seed=11)
            if not report.hypothesis_verified:
                continue
            checked += 1
            assert report.member_augmented
            assert report.sampled_implication_holds

    def test_empty_pairs(self):
        report = generalized_farkas([], [0.0, 0.0], 1.0)
        assert report.hypothesis_verified
        assert report.member_augmented  # (0, 1) alone reaches (0, 0, 1)
