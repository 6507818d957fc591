import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from energyalg.automaton import EnergyAutomaton
from energyalg.funcalg import BOT, INF, from_segments
from energyalg.multidim import MultiDimAutomaton
from energyalg.textio import ParseError, format_automaton, format_function, parse_automaton, parse_function
from helpers import DATA, functions, gen_automaton, gen_md_automaton

PIECEWISE_SAMPLE = "1/2 | x==2, 3/2x-5/2 | x>2, 23/10 | x==3, x-3/10 | x>3, 9/2 | x==9/2, 2x-9/2 | x>9/2"


def test_car_file():
    a = parse_automaton((DATA / "car.ea").read_text())
    assert isinstance(a, EnergyAutomaton)
    assert a.names == ("W", "R") and a.initial == 0 and a.accepting == {0}
    labels = {(a.names[s], a.names[t]): f for s, f, t in a.transitions}
    assert labels[("W", "R")] == parse_function("x-12 | x>=12")
    assert labels[("R", "W")](0) == 12 and labels[("R", "W")](2) == 16
    assert labels[("R", "R")](0) == INF


def test_piecewise_sample_function():
    f = parse_function(PIECEWISE_SAMPLE)
    assert f(F(2)) == F(1, 2)
    assert f(F(5, 2)) == F(5, 4)
    assert f(F(3)) == F(23, 10)
    assert f(F(4)) == F(37, 10)
    assert f(F(9, 2)) == F(9, 2)
    assert f(F(1)) == BOT
    text = format_function(f)
    assert parse_function(text) == f
    assert format_function(parse_function(text)) == text
    # points equal to a one-sided limit are absorbed into the pieces
    assert text == "3/2x-5/2 | x>=2, 23/10 | x==3, x-3/10 | x>3, 2x-9/2 | x>=9/2"


def test_print_forms():
    assert format_function(from_segments([0], [BOT], ["bot"])) == "bot | x>=0"
    assert format_function(parse_function("x | x>=0, inf | x>2")) == "x | x>=0, inf | x>2"
    assert format_function(parse_function("+x+0 | x>=0")) == "x | x>=0"
    assert format_function(parse_function("inf | x==1, inf | x>1")) == "inf | x>=1"


@given(functions)
@settings(max_examples=500, deadline=None)
def test_function_roundtrip(f):
    text = format_function(f)
    assert parse_function(text) == f
    assert format_function(parse_function(text)) == text


def test_automaton_roundtrip():
    for seed in range(200):
        a = gen_automaton(random.Random(seed))
        assert parse_automaton(format_automaton(a)) == a


def test_multidim_roundtrip():
    for seed in range(100):
        a = gen_md_automaton(random.Random(seed))
        b = parse_automaton(format_automaton(a))
        assert isinstance(b, MultiDimAutomaton) and b == a


def test_vass_file():
    a = parse_automaton((DATA / "vass.ea").read_text())
    assert a.dim == 2 and a.names == ("s", "t")
    (_, loop, _), (_, out, _) = a.transitions
    assert loop[0](F(3)) == 2 and loop[1](F(3)) == 4
    assert out[1](F(1)) == BOT


def test_empty_edge_list():
    a = parse_automaton("states: 2\ninitial: 1\naccepting:\n")
    assert a.transitions == () and a.n == 2 and a.accepting == frozenset()


def test_numeric_states_and_comments():
    a = parse_automaton("# c\nstates: 3   # three\ninitial: 2\naccepting: 3\nedge 2 -> 3 : x | x>=0\n")
    assert a.names == ("1", "2", "3") and a.initial == 1 and a.accepting == {2}


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("x+0.5 | x>=0", "decimal"),
        ("x | x>=0.5", "decimal"),
        ("x | x>=0, x+1 | x>=0", "overlaps"),
        ("x | x>1, x+1 | x>1", "overlaps"),
        ("1/2x | x>=0", "slope"),
        ("3 | x>=0", "slope"),
        ("x+2 | x>=0, x | x>=1", "energy inequality"),
        ("1 | x==2", "point clause"),
        ("x+1 | x<3", "guard"),
        ("x+1", "no guard"),
        ("y | x>=0", "expression"),
        ("x | x>=-1", "negative"),
    ],
)
def test_function_errors(text, fragment):
    with pytest.raises(ParseError) as err:
        parse_function(text)
    assert fragment in str(err.value)


def test_error_names_edge_and_piece():
    text = "states: a, b\ninitial: a\naccepting: b\nedge a -> b : x | x>=0\nedge b -> a : x+2 | x>=0, x | x>=1\n"
    with pytest.raises(ParseError) as err:
        parse_automaton(text)
    msg = str(err.value)
    assert "line 5" in msg and "edge 2 (b -> a)" in msg and "piece" in msg


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("initial: 1\n", "states"),
        ("states: 2\n", "initial"),
        ("states: 2\ninitial: 3\n", "unknown state"),
        ("states: 2\ninitial: 1\nedge 1 -> 2 : x | x>=0; x | x>=0\n", "dim"),
        ("states: 2\ninitial: 1\ndim: 2\nedge 1 -> 2 : x | x>=0\n", "components"),
        ("states: 2\ninitial: 1\nfoo\n", "unrecognised"),
        ("states: a, a\ninitial: a\n", "duplicate"),
        ("states: 1\ninitial: 1\ndim: 1\nedge 1 -> 1 : x+1/2 | x>=0\n", "non-integer"),
    ],
)
def test_automaton_errors(text, fragment):
    with pytest.raises(ParseError) as err:
        parse_automaton(text)
    assert fragment in str(err.value)
