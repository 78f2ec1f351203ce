import pytest

from helstrom.models.discrimination import (
    BinaryPovm,
    error_rate,
    helstrom_bound,
    helstrom_detector,
    sample_povm,
)
from helstrom.models.errors import InvalidDetector
from helstrom.models.nosignal import (
    BlackBoxResponse,
    Interval,
    blackbox_report,
    ensemble_response,
    nosignal_error_bound,
    povm_report,
    signalling_gap,
)
from helstrom.models.qubit import BlochVector
from helstrom.models.scenario import Scenario, build_scenario
from tests.conftest import random_pair


def test_interval_arithmetic():
    x = Interval(0.2, 0.5)
    assert (x + 0.1).to_list() == pytest.approx([0.3, 0.6])
    assert (1.0 - x).to_list() == pytest.approx([0.5, 0.8])
    assert (x + Interval.unit()).to_list() == pytest.approx([0.2, 1.5])
    assert x.scale(2.0).to_list() == pytest.approx([0.4, 1.0])
    assert x.contains(0.5) and not x.contains(0.6)
    assert Interval.point(0.3).width == 0.0


def test_ensemble_response_of_trivial_detectors(symmetric_scenario):
    for j in (0, 1):
        assert ensemble_response(BinaryPovm.random_guess(), symmetric_scenario, j) == pytest.approx((0.5, 0.5))
        assert ensemble_response(BinaryPovm.constant(0), symmetric_scenario, j) == pytest.approx((1.0, 0.0))


def test_ensemble_response_of_helstrom_detector(symmetric_scenario):
    detector = helstrom_detector(symmetric_scenario.r0, symmetric_scenario.r1)
    d00, d10 = ensemble_response(detector, symmetric_scenario, 0)
    d01, d11 = ensemble_response(detector, symmetric_scenario, 1)
    # p * 0.9 + (1 - p) * 0 with p = 5/9
    assert d00 == pytest.approx(0.5, abs=1e-12)
    assert d01 == pytest.approx(5 / 9 * 0.1 + 4 / 9 * 1.0, abs=1e-12)
    assert d11 == pytest.approx(0.5, abs=1e-12)
    assert d00 + d10 == pytest.approx(1.0)


def test_physical_detectors_never_signal(rng):
    for _ in range(10_000):
        s = build_scenario(*random_pair(rng))
        assert abs(signalling_gap(sample_povm(rng), s)) <= 1e-12


def test_corrupted_scenario_signals(symmetric_scenario):
    s = symmetric_scenario
    corrupted = Scenario(r0=s.r0, r1=s.r1, p=s.p + 1e-3, delta_hat=s.delta_hat, r_B=s.r_B)
    detector = helstrom_detector(s.r0, s.r1)
    assert signalling_gap(detector, corrupted) == pytest.approx(1.8e-3, abs=1e-9)


@pytest.mark.parametrize(
    "r0, r1, expected",
    [
        ((0, 0, 1), (0, 0, -1), 0.0),
        ((0.8, 0, 0), (-0.8, 0, 0), 0.1),
        ((0.6, 0, 0), (-0.6, 0, 0), 0.2),
    ],
)
def test_nosignal_error_bound_examples(r0, r1, expected):
    s = build_scenario(BlochVector(*r0), BlochVector(*r1))
    assert nosignal_error_bound(s) == pytest.approx(expected, abs=1e-12)


def test_nosignal_bound_equals_helstrom_bound(rng):
    for _ in range(10_000):
        r0, r1 = random_pair(rng)
        assert nosignal_error_bound(build_scenario(r0, r1)) == pytest.approx(helstrom_bound(r0, r1), abs=1e-12)


def test_perfect_black_box_signals(x06_scenario):
    report = blackbox_report(BlackBoxResponse.perfect(), x06_scenario)
    assert report.error_rate == 0.0
    assert report.nosignal_floor == pytest.approx(0.2, abs=1e-12)
    assert report.gap.lo == pytest.approx(0.25, abs=1e-12)
    assert report.signalling
    assert report.decodable
    assert not report.relabelled
    assert report.chain_flags["ensemble0_lower_bound"]
    assert report.chain_flags["ensemble1_lower_bound"]
    assert not report.chain_flags["no_signalling"]
    assert not report.chain_flags["success_sum_bound"]
    assert not report.chain_flags["nosignal_error_floor"]
    assert not report.chain_flags["helstrom_error_floor"]


def test_helstrom_rate_black_box_does_not_signal(rng):
    for _ in range(1000):
        s = build_scenario(*random_pair(rng))
        report = blackbox_report(BlackBoxResponse.helstrom_rate(s), s)
        assert abs(report.gap.lo) <= 1e-12
        assert not report.signalling
        assert report.error_rate == pytest.approx(nosignal_error_bound(s), abs=1e-12)


def test_uninformative_black_box(x06_scenario):
    report = blackbox_report(BlackBoxResponse(p0_rho0=0.5, p0_rho1=0.5), x06_scenario)
    assert report.error_rate == pytest.approx(0.5)
    assert report.gap.contains(0.0)
    assert not report.signalling
    assert not report.decodable
    assert all(report.chain_flags.values())


def test_unspecified_flags_widen_intervals(x06_scenario):
    report = blackbox_report(BlackBoxResponse.perfect(), x06_scenario)
    assert report.d00.width == pytest.approx(1 - x06_scenario.p)
    fixed = blackbox_report(BlackBoxResponse(1.0, 0.0, 0.0, 1.0), x06_scenario)
    assert fixed.d00.width == 0.0
    assert report.gap.contains(fixed.gap.lo)


def test_inverted_black_box_is_relabelled(x06_scenario):
    report = blackbox_report(BlackBoxResponse(p0_rho0=0.0, p0_rho1=1.0), x06_scenario)
    assert report.relabelled
    assert report.signalling
    assert report.error_rate == 0.0


def test_physical_detectors_satisfy_the_whole_chain(rng):
    for _ in range(1000):
        s = build_scenario(*random_pair(rng))
        report = povm_report(sample_povm(rng), s)
        assert all(report.chain_flags.values()), report.chain_flags
        assert not report.signalling
        assert abs(report.gap.lo) <= 1e-12


def test_error_below_floor_implies_positive_gap(x06_scenario):
    s = x06_scenario
    previous = None
    for success in (0.8, 0.85, 0.9, 0.95, 1.0):
        report = blackbox_report(BlackBoxResponse(success, 1.0 - success), s)
        assert report.signalling == (report.error_rate < report.nosignal_floor - 1e-9)
        if previous is not None:
            # both target successes rise by 0.05, each with slope p
            assert report.gap.lo - previous.gap.lo == pytest.approx(2 * s.p * 0.05, abs=1e-12)
        previous = report


def test_black_box_documents():
    b = BlackBoxResponse.from_dict({"p0_rho0": 0.9, "p0_rho1": 0.2, "p0_delta_plus": 0.1})
    assert b.p0_delta_minus is None
    assert not b.fully_specified
    assert BlackBoxResponse.from_dict(b.to_dict()) == b
    with pytest.raises(InvalidDetector):
        BlackBoxResponse.from_dict({"p0_rho0": 1.2, "p0_rho1": 0.0})
    with pytest.raises(InvalidDetector):
        BlackBoxResponse.from_dict({"p0_rho0": 0.5})


def test_report_document(x06_scenario):
    document = blackbox_report(BlackBoxResponse.perfect(), x06_scenario).to_dict()
    assert document["gap_lower_bound"] == pytest.approx(0.25)
    assert document["gap"][0] == document["gap_lower_bound"]
    assert document["signalling"] is True


def test_from_povm_matches_error_rate(symmetric_scenario):
    s = symmetric_scenario
    detector = helstrom_detector(s.r0, s.r1)
    report = povm_report(detector, s)
    assert report.error_rate == pytest.approx(error_rate(detector, s.r0, s.r1), abs=1e-12)
