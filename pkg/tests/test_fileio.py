import numpy as np
import pytest

from locdisc import sampling
from locdisc.fileio import (
    InvariantError, ParseError, format_certificate, format_ensemble, parse_certificate, parse_ensemble,
    parse_state,
)
from locdisc.schmidt_corr import schmidt_correlate

BELL_FILE = """\
# Bell pair
dims: 2 2
amp 0 0.7071067811865476 0
amp 3 0.7071067811865476 0
---
dims: 2 2
amp 1 0.7071067811865476 0
amp 2 0.7071067811865476 0
priors: 0.5 0.5
"""


def test_parse_bell():
    e = parse_ensemble(BELL_FILE)
    assert e.dims == (2, 2) and e.p1 == 0.5
    assert abs(np.vdot(e.state1.amplitudes, e.state2.amplitudes)) == 0


def test_round_trip_is_exact(rng):
    e = sampling.random_pure_ensemble(rng, (2, 3))
    back = parse_ensemble(format_ensemble(e))
    np.testing.assert_array_equal(back.state1.amplitudes, e.state1.amplitudes)
    assert back.p1 == e.p1 and back.p2 == e.p2
    assert format_ensemble(back) == format_ensemble(e)


def test_mixed_round_trip(rng):
    e = sampling.random_2d_span_ensemble(rng, (2, 2))
    back = parse_ensemble(format_ensemble(e))
    np.testing.assert_array_equal(back.state2.density(), e.state2.density())


@pytest.mark.parametrize("text,line", [
    (BELL_FILE.replace("priors: 0.5 0.5", "priors: 0.5"), 9),
    (BELL_FILE.replace("amp 3 0.7071067811865476 0", "amp 3 x 0"), 4),
    (BELL_FILE.replace("amp 3 0.7071067811865476 0", "amp 7 0.7 0"), 4),
    (BELL_FILE.replace("dims: 2 2\namp 1", "dim: 2 2\namp 1"), 6),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_ensemble(text)
    assert info.value.lineno == line


def test_missing_priors_names_key():
    with pytest.raises(ParseError, match="priors:"):
        parse_ensemble(BELL_FILE.replace("priors: 0.5 0.5\n", ""))


def test_invariant_errors():
    with pytest.raises(InvariantError):
        parse_ensemble(BELL_FILE.replace("priors: 0.5 0.5", "priors: 0.5 0.7"))
    with pytest.raises(InvariantError):
        parse_state("dims: 2\namp 0 1 0\namp 1 1 0\n")


def test_certificate_round_trip():
    f = np.array([[1, 0], [0, 1]]) / np.sqrt(2)
    g = np.array([[0, 1], [1, 0]]) / np.sqrt(2)
    cert = schmidt_correlate(f, g)
    fields = parse_certificate(format_certificate(cert))
    assert fields["verdict"] == "correlatable"
    np.testing.assert_array_equal(fields["U"], cert.u)
    np.testing.assert_array_equal(fields["y"], cert.y)
