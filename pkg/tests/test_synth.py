import pytest

from adicca.builders import SubstitutionSpec, from_substitution
from adicca.diagram import DiagramSpec, PathRep, Tail, pad, validate
from adicca.errors import AmbiguousRule, DepthExceedsCore, Mismatch, NotProperlyOrdered, UnseenContext
from adicca.estimator import AdicAutomaton
from adicca.spacetime import edge, encode_row
from adicca.synth import (
    RuleTable, Simulator, apply_rule, build_rule, clock_step, decode, decode_symbols,
    make_x_init, simulate, verify_conjugacy, window_bounds,
)
from adicca.vershik import minimal_path, predecessor, successor


@pytest.fixture(scope="module")
def abb_rule(abb):
    return build_rule(abb)


def test_window_bounds():
    assert window_bounds(3) == (1, 1)
    assert window_bounds(4) == (1, 2)


def test_rule_is_functional_and_saturated(abb_rule):
    assert abb_rule.functional and abb_rule.saturated and abb_rule.w == 3
    c = clock_step(3)
    assert abb_rule((c, c, c)) == c


def test_x_init_anchors(abb, abb_rule):
    cfg = make_x_init(abb, 3)
    assert cfg.cell(cfg.kmin - 1) == clock_step(3)
    assert decode(cfg, abb_rule, 10) == PathRep((0,) * 10, Tail.MIN)
    # the centre of cell k is column k of row -k
    p = minimal_path(abb)
    for k in range(1, 6):
        p = predecessor(abb, p)
        assert cfg.cell(k)[1] == encode_row(abb, p, k)[k]


def test_dirty_set_matches_full_update(abb, abb_rule):
    cfg = make_x_init(abb, 3)
    snaps = simulate(cfg, abb_rule, 30)
    lo_k, hi_k = cfg.kmin - 3, cfg.kmax + 40
    cells = [cfg.cell(k) for k in range(hi_k, lo_k - 1, -1)]
    for t in range(1, 31):
        cells = [cells[0]] + apply_rule(cells, abb_rule) + [cells[-1]]
        want = {hi_k - i: c for i, c in enumerate(cells)}
        for k in range(lo_k + t, hi_k - t):
            assert snaps[t].cell(k) == want[k], (t, k)


def test_decode_follows_adic_orbit(abb, abb_rule):
    sim = Simulator(make_x_init(abb, 3), abb_rule)
    p = minimal_path(abb)
    for _ in range(300):
        assert decode_symbols(sim, abb_rule, 8) == encode_row(abb, p, 8).cells
        sim.step()
        p = successor(abb, p)


def test_small_conjugacy_runs(odo2, toep):
    for d in (odo2, toep):
        rep = verify_conjugacy(d, 256, 6)
        assert rep.ok, rep.mismatches[:1]


def test_corrupted_rule_is_caught(abb, abb_rule):
    table = dict(abb_rule.table)
    ctx = next(k for k, v in table.items() if v[1].kind == "K")
    out = table[ctx]
    table[ctx] = (out[0], out[1]._replace(vertex="b" if out[1].vertex == "a" else "a"), out[2])
    bad = RuleTable(3, 1, table)
    with pytest.raises((Mismatch, UnseenContext)):
        verify_conjugacy(abb, 200, 8, rule=bad, raise_on_mismatch=True)


def test_unseen_context(abb_rule):
    c = clock_step(3)
    junk = (edge("z", "Q", 9),) * 3
    with pytest.raises(UnseenContext) as info:
        abb_rule((junk, c, c))
    assert info.value.context == (junk, c, c)


def test_negative_depth(abb, abb_rule):
    with pytest.raises(DepthExceedsCore):
        decode_symbols(make_x_init(abb, 3), abb_rule, -1)


def test_ambiguous_substitution():
    d = validate(from_substitution(SubstitutionSpec.of({"a": "aab", "b": "abb"})))
    with pytest.raises(AmbiguousRule) as info:
        build_rule(d, rows=64, width=10, max_doublings=0)
    assert info.value.counterexamples


def test_requires_proper_order():
    # maximal edges swap a and b, so there are two maximal paths
    d = validate(DiagramSpec.build({"a": 1, "b": 1}, {"T": {"a": "ab", "b": "aa"}}, ["T"]))
    with pytest.raises(NotProperlyOrdered):
        build_rule(d)


def test_estimator(abb):
    est = AdicAutomaton(depth=6).fit(from_substitution(SubstitutionSpec.of({"a": "abb", "b": "ab"})))
    assert est.get_params()["depth"] == 6
    times = [0, 5, 3, 40]
    got = est.transform(times)
    assert got.shape == (4, 6)
    want = est.predict(times)
    assert (got == want).all() and est.score(times) == 1.0
    p = minimal_path(abb)
    for _ in range(5):
        p = successor(abb, p)
    assert tuple(want[1]) == pad(abb, p, 6).labels
    with pytest.raises(TypeError):
        AdicAutomaton().fit("not a diagram")
