import pytest

from linepack.errors import InputError, ResourceError
from linepack.permgroup import (
    GroupAction,
    Permutation,
    PermutationGroup,
    group_order,
    induced_pair_action,
    is_transitive,
    orbit,
    parse_cycles,
    point_stabilizer,
    regular_action,
)

S3 = PermutationGroup.from_cycles(3, ["(0 1 2)", "(0 1)"])
Z4 = PermutationGroup.from_cycles(4, ["(0 1 2 3)"])


def brute_force_elements(group):
    """Oracle: full closure by repeated multiplication, no chain involved."""
    seen = {Permutation.identity(group.degree).images}
    frontier = list(seen)
    while frontier:
        new = []
        for imgs in frontier:
            for g in group.generators:
                q = tuple(g.images[j] for j in imgs)
                if q not in seen:
                    seen.add(q)
                    new.append(q)
        frontier = new
    return seen


def test_permutation_validation():
    with pytest.raises(InputError):
        Permutation((0, 0, 1))


def test_compose_and_inverse():
    p = parse_cycles("(0 1 2)", 4)
    q = parse_cycles("(2 3)", 4)
    assert (p * q).images == tuple(p(q(x)) for x in range(4))
    assert (p * p.inverse()).is_identity()
    assert p.inverse().inverse() == p


def test_cycle_parse_roundtrip():
    p = parse_cycles("(0 1 2)(3 4)")
    assert p.degree == 5
    assert parse_cycles(p.cycle_string()) == p
    assert parse_cycles("( 0 , 1 ) (3 4)", 6) == parse_cycles("(0 1)(3 4)", 6)
    with pytest.raises(InputError):
        parse_cycles("(0 1 junk)")


def test_orbit_examples():
    assert orbit(S3, 0) == {0, 1, 2}
    trivial = PermutationGroup(5, [])
    assert orbit(trivial, 2) == {2}
    g = PermutationGroup.from_cycles(4, ["(0 1)(2 3)"])
    assert orbit(g, 0) == {0, 1}
    with pytest.raises(InputError):
        orbit(S3, 3)


def test_is_transitive_examples():
    assert is_transitive(GroupAction(S3)) is True
    assert is_transitive(GroupAction(PermutationGroup.from_cycles(3, ["(0 1)"]))) is False


@pytest.mark.parametrize(
    "group,expected",
    [
        (S3, 6),
        (Z4, 4),
        (PermutationGroup(4, []), 1),
        (PermutationGroup.from_cycles(5, ["(0 1 2 3 4)", "(0 1)"]), 120),
        (PermutationGroup.from_cycles(7, ["(0 1 2 3 4 5 6)", "(0 1 2)"]), 2520),
    ],
)
def test_group_order_small(group, expected):
    assert group_order(group) == expected
    assert len(brute_force_elements(group)) == expected


def test_group_order_mathieu12():
    # Mongean-shuffle generators: reversal and the over/under shuffle.
    rev = Permutation(tuple(11 - i for i in range(12)))
    shuf = Permutation(tuple(2 * i + 1 if i < 6 else 22 - 2 * i for i in range(12)))
    m12 = PermutationGroup(12, [rev, shuf])
    assert group_order(m12) == 95040


def test_membership():
    assert S3.contains(parse_cycles("(1 2)", 3))
    a4 = PermutationGroup.from_cycles(4, ["(0 1 2)", "(1 2 3)"])
    assert group_order(a4) == 12
    assert not a4.contains(parse_cycles("(0 1)", 4))


def test_point_stabilizer_examples():
    st = point_stabilizer(S3, 0)
    assert group_order(st) == 2
    assert all(g(0) == 0 for g in st.generators)
    reg = regular_action(Z4)
    st = point_stabilizer(reg.group, 1)
    assert group_order(st) == 1


@pytest.mark.parametrize("group", [S3, Z4, PermutationGroup.from_cycles(6, ["(0 1 2 3 4 5)", "(1 5)(2 4)"])])
def test_orbit_stabilizer_invariant(group):
    for x in range(group.degree):
        assert len(orbit(group, x)) * group_order(point_stabilizer(group, x)) == group_order(group)


def test_generator_closure_invariant():
    g = PermutationGroup.from_cycles(6, ["(0 1 2 3 4 5)", "(1 5)(2 4)"])
    orb = orbit(g, 0)
    for gen in g.generators:
        assert all(gen(x) in orb for x in orb)


def brute_force_pair_orbits(action):
    """Oracle: orbit count of the pair action by direct closure on pairs."""
    n = action.point_count
    gens = action.group.generators
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    unseen = set(pairs)
    orbits = 0
    while unseen:
        seed = unseen.pop()
        frontier = [seed]
        while frontier:
            (i, j) = frontier.pop()
            for g in gens:
                im = (g(i), g(j))
                if im in unseen:
                    unseen.remove(im)
                    frontier.append(im)
        orbits += 1
    return orbits


def test_induced_pair_action_examples():
    act = induced_pair_action(GroupAction(S3))
    assert act.point_count == 6
    assert is_transitive(act)
    z3 = GroupAction(PermutationGroup.from_cycles(3, ["(0 1 2)"]))
    act = induced_pair_action(z3)
    assert act.point_count == 6
    assert not is_transitive(act)


@pytest.mark.parametrize(
    "group",
    [
        S3,
        PermutationGroup.from_cycles(4, ["(0 1 2 3)", "(0 1)"]),
        PermutationGroup.from_cycles(5, ["(0 1 2 3 4)"]),
        PermutationGroup.from_cycles(8, ["(0 1 2 3 4 5 6 7)", "(0 2)(1 3)"]),
    ],
)
def test_pair_action_properties(group):
    src = GroupAction(group)
    act = induced_pair_action(src)
    assert group_order(act.group) == group_order(group)
    # transitive on pairs exactly when the pair-orbit oracle finds one orbit
    assert is_transitive(act) == (brute_force_pair_orbits(src) == 1)


def test_regular_action_examples():
    act = regular_action(Z4)
    assert act.point_count == 4
    assert is_transitive(act)
    act = regular_action(S3)
    assert act.point_count == 6
    assert is_transitive(act)
    assert group_order(act.group) == 6
    act = regular_action(PermutationGroup(3, []))
    assert act.point_count == 1
    with pytest.raises(ResourceError):
        regular_action(S3, element_limit=5)


def test_element_enumeration_deterministic():
    elems1 = S3.elements()
    elems2 = PermutationGroup.from_cycles(3, ["(0 1 2)", "(0 1)"]).elements()
    assert [p.images for p in elems1] == [p.images for p in elems2]
    assert elems1[0].is_identity()
