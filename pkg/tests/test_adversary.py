import itertools

import pytest

from subtag.adversary import (
    AttackSystem,
    CoalitionView,
    assemble_system,
    consistent_keys,
    count_consistent_keys,
    deterministic_forge,
    guess_forge,
    label_distribution,
    packet_for_label,
    recover_verifier_key,
)
from subtag.errors import (
    InconsistentSystem,
    InvalidParams,
    NotQualified,
    PayloadInSubspace,
    TargetInCoalition,
    TooLargeToEnumerate,
)
from subtag.fields import FieldElement
from subtag.scheme import (
    VerifierKey,
    distribute,
    keygen,
    tag_basis,
    tag_payload,
    verify,
)

from oracles import brute_consistent_keys, brute_label_histogram


@pytest.fixture(scope="module")
def tiny(tiny_pp):
    """One honest session on the brute-forceable instance."""
    mk = keygen(tiny_pp, 13)
    vks = distribute(tiny_pp, mk)
    packets = tag_basis(tiny_pp, mk, ((1, 0),))
    return tiny_pp, mk, vks, packets


def test_view_build_validation(tiny):
    pp, mk, vks, packets = tiny
    with pytest.raises(InvalidParams):
        CoalitionView.build(pp, {4: vks[0]})
    with pytest.raises(InvalidParams):
        CoalitionView.build(pp, {2: vks[0]})  # key carries index 1
    with pytest.raises(InvalidParams):
        CoalitionView.build(pp, {1: vks[0]}, {9: packets})
    view = CoalitionView.build(pp, [vks[0], vks[2]], {1: packets})
    assert view.members == (1, 3)
    assert view.all_packets() == packets
    # an eavesdropper holds traffic but no keys
    outsider = CoalitionView.build(pp, {}, packets)
    assert outsider.members == ()
    assert outsider.observed == packets


def test_r0_k0_frozen(tiny):
    pp, mk, vks, packets = tiny
    # no members, no packets
    empty = CoalitionView.build(pp, {})
    s = assemble_system(empty)
    assert (s.r0, s.k0) == (0, 0)
    assert s.unknowns == pp.kdim * (pp.M + 1)
    # one member, one packet
    view = CoalitionView.build(pp, {1: vks[0]}, {1: packets})
    s = assemble_system(view)
    assert (s.r0, s.k0) == (1, 1)
    # two members of the MDS [3,2] code span everything
    view2 = CoalitionView.build(pp, {1: vks[0], 2: vks[1]}, {1: packets})
    s2 = assemble_system(view2)
    assert (s2.r0, s2.k0) == (1, 2)


def test_key_count_matches_brute_force(tiny):
    """Closed form, solver nullity, and full 256-key enumeration agree."""
    pp, mk, vks, packets = tiny
    cases = [
        ((), ()),
        ((), packets),
        ((1,), ()),
        ((1,), packets),
        ((1, 2), packets),
        ((1, 2, 3), packets),
    ]
    for members, pkts in cases:
        view = CoalitionView.build(pp, {i: vks[i - 1] for i in members}, pkts)
        counts = count_consistent_keys(assemble_system(view))
        assert counts.predicted == counts.measured
        brute = sum(
            1
            for _ in brute_consistent_keys(
                pp,
                members,
                [vks[i - 1].column for i in members],
                list(pkts),
            )
        )
        assert counts.measured == brute, (members, len(pkts))


def test_second_session_pins_the_key(tiny_pp):
    """Tagging two independent payloads under one key raises r0 to M+1,
    and an outsider can then solve for the whole master key."""
    pp = tiny_pp
    mk = keygen(pp, 21)
    p1 = tag_payload(pp, mk, (1, 0))
    p2 = tag_payload(pp, mk, (0, 1))
    view = CoalitionView.build(
        pp, {1: distribute(pp, mk)[0]}, {1: (p1, p2)}
    )
    system = assemble_system(view)
    assert system.r0 == pp.M + 1
    counts = count_consistent_keys(system)
    assert counts.predicted == counts.measured == 1
    only = next(iter(consistent_keys(system)))
    assert only.matrix == mk.matrix


def test_inconsistent_view_rejected(tiny):
    pp, mk, vks, packets = tiny
    # swap in a wrong key column for member 1
    wrong = VerifierKey(1, vks[1].column)
    view = CoalitionView.build(pp, {1: wrong}, {1: packets})
    with pytest.raises(InconsistentSystem):
        count_consistent_keys(assemble_system(view))


def test_consistent_keys_enumeration_matches_brute(tiny):
    pp, mk, vks, packets = tiny
    view = CoalitionView.build(pp, {1: vks[0]}, {1: packets})
    system = assemble_system(view)
    got = {mk2.matrix.to_index_rows() for mk2 in consistent_keys(system)}
    want = {
        tuple(tuple(e.index for e in row) for row in rows)
        for rows in brute_consistent_keys(pp, (1,), [vks[0].column], list(packets))
    }
    assert got == want
    assert mk.matrix.to_index_rows() in got
    with pytest.raises(TooLargeToEnumerate):
        list(consistent_keys(system, guard=2))


def test_recover_verifier_key(rs_pp):
    mk = keygen(rs_pp, 3)
    vks = distribute(rs_pp, mk)
    packets = tag_basis(rs_pp, mk, ((1, 0, 0), (0, 1, 0)))
    view = CoalitionView.build(rs_pp, {1: vks[0], 2: vks[1], 3: vks[2]}, {1: packets})
    rec = recover_verifier_key(view, 5)
    assert rec.index == 5
    assert rec.column == vks[4].column
    small = CoalitionView.build(rs_pp, {1: vks[0], 2: vks[1]}, {1: packets})
    with pytest.raises(NotQualified):
        recover_verifier_key(small, 5)


def test_deterministic_forge_end_to_end(rs_pp):
    mk = keygen(rs_pp, 3)
    vks = distribute(rs_pp, mk)
    basis = ((1, 0, 0), (0, 1, 0))
    packets = tag_basis(rs_pp, mk, basis)
    view = CoalitionView.build(rs_pp, {1: vks[0], 2: vks[1], 3: vks[2]}, {1: packets})
    payload = (0, 0, 1)  # outside span{e1, e2}
    pkt = deterministic_forge(view, 4, payload)
    assert pkt.payload == payload
    assert verify(rs_pp, vks[3], pkt)
    with pytest.raises(PayloadInSubspace):
        deterministic_forge(view, 4, (1, 1, 0))
    with pytest.raises(TargetInCoalition):
        deterministic_forge(view, 2, payload)
    with pytest.raises(NotQualified):
        deterministic_forge(
            CoalitionView.build(rs_pp, {1: vks[0]}, {1: packets}), 4, payload
        )


def test_packet_for_label_hits_requested_label(rs_pp):
    from subtag.scheme import label as scheme_label

    mk = keygen(rs_pp, 3)
    vks = distribute(rs_pp, mk)
    want = rs_pp.ext.element(77)
    pkt = packet_for_label(rs_pp, 4, (0, 0, 1), want)
    got = rs_pp.ext.zero
    g = rs_pp.generator_column(4)
    for t in range(rs_pp.kdim):
        got = got + pkt.tag[t] * g[t]
    assert got == want
    # the packet passes at the target exactly when the guess equals the
    # label the target's key produces
    true_label = scheme_label(rs_pp, vks[3], 1, (0, 0, 1))
    assert verify(rs_pp, vks[3], pkt) == (want == true_label)


def test_guess_forge_deterministic_per_seed(rs_pp):
    mk = keygen(rs_pp, 3)
    vks = distribute(rs_pp, mk)
    packets = tag_basis(rs_pp, mk, ((1, 0, 0), (0, 1, 0)))
    view = CoalitionView.build(rs_pp, {1: vks[0]}, {1: packets})
    a = guess_forge(view, 4, (0, 0, 1), seed=55)
    b = guess_forge(view, 4, (0, 0, 1), seed=55)
    c = guess_forge(view, 4, (0, 0, 1), seed=56)
    assert a == b
    assert a != c
    with pytest.raises(TargetInCoalition):
        guess_forge(view, 1, (0, 0, 1), seed=1)


def test_label_distribution_matches_brute(tiny):
    pp, mk, vks, packets = tiny
    view = CoalitionView.build(pp, {1: vks[0]}, {1: packets})
    hist = label_distribution(view, 3, (0, 1))
    brute = brute_label_histogram(
        pp, (1,), [vks[0].column], list(packets), 3, 1, (0, 1)
    )
    assert {e.index: c for e, c in hist.items()} == brute


def test_label_distribution_uniform_for_unqualified(tiny):
    """The heart of the security bound: over all consistent keys, the
    target's label is exactly uniform, so a substitution passes with
    probability exactly 1/q^l."""
    pp, mk, vks, packets = tiny
    # any two columns of the [3,2] code are qualified, so stay below that
    for members in ((), (1,), (2,)):
        view = CoalitionView.build(pp, {i: vks[i - 1] for i in members}, packets)
        hist = label_distribution(view, 3, (0, 1))
        assert len(hist) == pp.ext.order
        counts = set(hist.values())
        assert len(counts) == 1, members


def test_label_distribution_rejects_member_target(tiny):
    pp, mk, vks, packets = tiny
    view = CoalitionView.build(pp, {1: vks[0], 3: vks[2]}, {1: packets})
    with pytest.raises(TargetInCoalition):
        label_distribution(view, 3, (0, 1))


def test_label_point_mass_when_coalition_qualified(tiny):
    from subtag.scheme import label as scheme_label

    pp, mk, vks, packets = tiny
    view = CoalitionView.build(pp, {1: vks[0], 2: vks[1]}, {1: packets})
    hist = label_distribution(view, 3, (0, 1))
    true_label = scheme_label(pp, vks[2], 1, (0, 1))
    assert hist == {true_label: sum(hist.values())}
