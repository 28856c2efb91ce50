import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gftpl import (
    InvalidMatrixError,
    NotASeparatorError,
    ParameterError,
    TranslationSpec,
    VcgReserveEnvironment,
    check_admissibility,
    pseudo_complexity,
    rows_matrix,
    translation_from_distinguishing_set,
    verify_implementability,
    vcg_translation,
)
from gftpl.environments import (
    LevelAuctionEnvironment,
    SispaEnvironment,
    bidding_translation,
    level_translation,
    unit_demand_valuation,
)
from gftpl.environments.base import Environment


class _TableEnv(Environment):
    """Tiny environment backed by an explicit payoff table (tests only)."""

    def __init__(self, table):
        self.table = table
        super().__init__(sorted(table))

    def payoff(self, action, adversary_action):
        return self.table[action][adversary_action]


def test_vcg_table_for_two_bidders_three_levels_is_21_admissible():
    env = VcgReserveEnvironment(2, 3, 1)
    spec = vcg_translation(2, 3)
    rows = rows_matrix(spec, env.actions)
    # binary encodings 01/10/11 of m*r per bidder, most significant bit first
    expected = {
        (1 / 3, 1 / 3): [0, 1, 0, 1],
        (1 / 3, 2 / 3): [0, 1, 1, 0],
        (1 / 3, 3 / 3): [0, 1, 1, 1],
        (2 / 3, 1 / 3): [1, 0, 0, 1],
        (2 / 3, 2 / 3): [1, 0, 1, 0],
        (2 / 3, 3 / 3): [1, 0, 1, 1],
        (3 / 3, 1 / 3): [1, 1, 0, 1],
        (3 / 3, 2 / 3): [1, 1, 1, 0],
        (3 / 3, 3 / 3): [1, 1, 1, 1],
    }
    for action, row in zip(env.actions, rows):
        assert list(row) == expected[action]
    report = check_admissibility(rows)
    assert (report.kappa, report.delta, report.rows_distinct) == (2, 1.0, True)


def test_duplicate_rows_flagged():
    report = check_admissibility([[0.5, 0.5], [0.5, 0.5]])
    assert not report.rows_distinct
    assert not report.admissible


def test_level_rows_exhaustive_constants():
    env = LevelAuctionEnvironment(2, 2, 2)
    rows = rows_matrix(level_translation(2, 2, 2), env.actions)
    report = check_admissibility(rows)
    assert report.rows_distinct
    assert report.kappa <= 3 and report.kappa == 3
    assert report.delta == pytest.approx(0.5)


def test_admissibility_rejects_bad_tables():
    with pytest.raises(InvalidMatrixError):
        check_admissibility([[0.1, 0.2], [0.3]])
    with pytest.raises(InvalidMatrixError):
        check_admissibility([[1.5]])
    with pytest.raises(InvalidMatrixError):
        check_admissibility(np.zeros((0, 2)))


def test_all_constant_columns_report_delta_one():
    report = check_admissibility([[0.5], [0.5], [0.5]])
    assert report.kappa == 1 and report.delta == 1.0 and not report.rows_distinct


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(1, 4), st.integers(0, 10_000))
def test_admissibility_properties_on_random_tables(n_rows, n_cols, seed):
    rng = np.random.default_rng(seed)
    mat = rng.integers(0, 3, size=(n_rows, n_cols)) / 2.0
    report = check_admissibility(mat)
    assert report.kappa >= 1
    assert 0 < report.delta <= 1.0
    # kappa counts exactly the richest column
    assert report.kappa == max(len(set(mat[:, j])) for j in range(n_cols))


def test_verify_implementability_on_the_worked_column():
    # low bit of the second bidder: weights (6, 0, 3) on the ladder profiles
    env = VcgReserveEnvironment(2, 3, 1)
    spec = vcg_translation(2, 3)
    weights = [w for w, _ in spec.datasets[3]]
    assert weights == pytest.approx([6.0, 0.0, 3.0])
    ok, dev = verify_implementability(spec, env)
    assert ok and dev <= 1e-9


def test_empty_dataset_realizes_a_constant_column():
    env = _TableEnv({"a": {"y": 0.3}, "b": {"y": 0.9}})
    spec = TranslationSpec(num_columns=1, row=lambda x: [0.25], datasets=[[]])
    ok, dev = verify_implementability(spec, env)
    assert ok and dev == 0.0


def test_perturbed_weights_fail_with_visible_deviation():
    env = VcgReserveEnvironment(2, 3, 1)
    good = vcg_translation(2, 3)
    datasets = [list(ds) for ds in good.datasets]
    w, y = datasets[3][0]
    datasets[3][0] = (w + 0.5, y)
    bad = TranslationSpec(num_columns=good.num_columns, row=good.row, datasets=datasets)
    ok, dev = verify_implementability(bad, env)
    assert not ok
    assert dev >= 0.1


def test_explicit_pairs_mode_matches_exhaustive():
    env = VcgReserveEnvironment(2, 3, 1)
    spec = vcg_translation(2, 3)
    pairs = list(itertools.combinations(env.actions, 2))
    ok, dev = verify_implementability(spec, env, pairs=pairs)
    assert ok and dev <= 1e-9
    with pytest.raises(ParameterError):
        verify_implementability(spec, env, pairs=[])


def test_pseudo_complexity_values():
    assert pseudo_complexity(level_translation(2, 2, 3)) == 1.0
    val = unit_demand_valuation([1.0, 0.75], 2)
    assert pseudo_complexity(bidding_translation(val, 2, 4)) <= 4.0
    m = 3
    assert pseudo_complexity(vcg_translation(2, m)) <= 2 * m * (m - 1) + m


def test_dataset_weight_validation():
    with pytest.raises(ParameterError):
        TranslationSpec(num_columns=1, row=lambda x: [0.0], datasets=[[(-1.0, "y")]])
    with pytest.raises(ParameterError):
        TranslationSpec(num_columns=2, row=lambda x: [0.0, 0.0], datasets=[[]])


def _boolean_function_env(functions, inputs):
    table = {name: {z: float(fn(z)) for z in inputs} for name, fn in functions.items()}
    return _TableEnv(table)


def test_distinguishing_set_for_and_or():
    inputs = [(a, b) for a in (0, 1) for b in (0, 1)]
    env = _boolean_function_env(
        {"and": lambda z: z[0] and z[1], "or": lambda z: z[0] or z[1]}, inputs)
    spec = translation_from_distinguishing_set(env, [(1, 0)])
    assert spec.num_columns == 1
    assert list(spec.row("and")) == [0.0]
    assert list(spec.row("or")) == [1.0]
    ok, dev = verify_implementability(spec, env)
    assert ok


def test_empty_probe_set_rejected():
    inputs = [(0,), (1,)]
    env = _boolean_function_env({"id": lambda z: z[0], "not": lambda z: 1 - z[0]}, inputs)
    with pytest.raises(NotASeparatorError):
        translation_from_distinguishing_set(env, [])


def test_indistinguishable_pair_reported():
    inputs = [(0,), (1,)]
    env = _boolean_function_env(
        {"id": lambda z: z[0], "id2": lambda z: z[0], "not": lambda z: 1 - z[0]}, inputs)
    with pytest.raises(NotASeparatorError) as err:
        translation_from_distinguishing_set(env, inputs)
    assert set(err.value.pair) == {"id", "id2"}


def test_brute_force_minimal_distinguisher_is_21_admissible():
    # eight random boolean functions over 3-bit inputs; find a minimal probe set
    rng = np.random.default_rng(7)
    inputs = list(itertools.product((0, 1), repeat=3))
    functions = {}
    while len(functions) < 8:
        bits = tuple(int(b) for b in rng.integers(0, 2, size=8))
        functions.setdefault(f"f{bits}", dict(zip(inputs, bits)))
    env = _TableEnv({name: {z: float(v) for z, v in tab.items()}
                     for name, tab in functions.items()})

    probes = None
    for size in range(1, len(inputs) + 1):
        for cand in itertools.combinations(inputs, size):
            rows = {tuple(env.payoff(x, z) for z in cand) for x in env.actions}
            if len(rows) == len(env.actions):
                probes = list(cand)
                break
        if probes:
            break
    assert probes is not None
    spec = translation_from_distinguishing_set(env, probes)
    report = check_admissibility(rows_matrix(spec, env.actions))
    assert (report.kappa, report.delta, report.rows_distinct) == (2, 1.0, True)


def test_binary_payoff_precondition_enforced():
    env = _TableEnv({"a": {"y": 0.5}, "b": {"y": 1.0}})
    with pytest.raises(ParameterError):
        translation_from_distinguishing_set(env, ["y"])
