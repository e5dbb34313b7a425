"""Each structural condition has a clean bundle and a one-edit mutation of
it that breaks exactly that condition and nothing else."""
import pytest

from awaregames.awareness import validate_with_awareness
from awaregames.bundle import bundle_from_obj
from mutations import FIXTURES


@pytest.mark.parametrize("tag", sorted(FIXTURES))
def test_base_is_valid(tag):
    base, _ = FIXTURES[tag]()
    rep = validate_with_awareness(bundle_from_obj(base))
    assert rep.ok, [str(v) for v in rep]


@pytest.mark.parametrize("tag", sorted(FIXTURES))
def test_mutation_trips_only_its_condition(tag):
    _, bad = FIXTURES[tag]()
    rep = validate_with_awareness(bundle_from_obj(bad))
    assert rep.tags() == {tag}, [str(v) for v in rep]
    assert all(v.game for v in rep)


def test_every_condition_has_a_fixture():
    a = {f"A{k}" for k in range(1, 13)} | {"A4'", "A5'", "A8'"}
    c = {f"C{k}" for k in range(1, 11)} | {"C1'", "C2'", "C6'"}
    assert set(FIXTURES) == a | c | {"M1", "M2", "M3"}
