from dataclasses import replace

import numpy as np
import pytest

from chain.model import Chain
from errors import NonTerminatingChain, PathCapExceeded, UnboundAtomIdentifier, UnsupportedPattern
from modellang.constants import resolve_constants
from modellang.parser import parse_model
from propcheck import (
    Eventually, Globally, GloballyAny, NextSafety, Response, Until,
    bound_holds, brute_force_prob, check, compile_monitor, parse_property, parse_property_file, solve_reachability,
)


def random_dag(rng: np.random.Generator, n_states: int) -> Chain:
    """Transitions only go to higher indices; the last state is always absorbing"""
    rows = []
    for i in range(n_states):
        later = np.arange(i + 1, n_states)
        if later.size == 0 or rng.random() < 0.2:
            rows.append([(i, 1.0)])
            continue
        targets = rng.choice(later, size=min(later.size, int(rng.integers(1, 4))), replace=False)
        weights = rng.random(targets.size) + 0.05
        weights /= weights.sum()
        rows.append(list(zip(targets.tolist(), weights.tolist())))
    return Chain.from_rows(rows)


def random_cyclic(rng: np.random.Generator, n_states: int, n_absorbing: int) -> Chain:
    """Arbitrary back edges, but every transient state can step to i+1"""
    n_transient = n_states - n_absorbing
    rows = []
    for i in range(n_transient):
        targets = set(rng.choice(n_states, size=3, replace=False).tolist()) | {i + 1}
        weights = rng.random(len(targets)) + 0.05
        weights /= weights.sum()
        rows.append(list(zip(sorted(targets), weights.tolist())))
    rows += [[(i, 1.0)] for i in range(n_transient, n_states)]
    return Chain.from_rows(rows)


def query_texts(rng: np.random.Generator, n_states: int):
    a, b, c = (int(v) for v in rng.integers(0, n_states, size=3))
    return [
        f"P=? [ F s={a} ]",
        f"P=? [ G s!={b} ]",
        f"P=? [ G (s={a} => F s={b}) ]",
        f"P=? [ G (s={a} => !X s={b}) ]",
        f"P=? [ G (s={a} => X !s={c}) ]",
        f"P=? [ s<={a} U s={b} ]",
        f"P=? [ G ((F s={a}) | (F (s<={b} U s={c}))) ]",
    ]


class TestClassify:
    @pytest.mark.parametrize("text, pattern", [
        ("P=? [ F s=1 ]", Eventually),
        ("P=? [ G s!=2 ]", Globally),
        ("P=? [ G (s=0 => F s=1) ]", Response),
        ("P=? [ G (s=0 => !X s=1) ]", NextSafety),
        ("P=? [ G (s=0 => X !s=1) ]", NextSafety),
        ("P=? [ s<=2 U s=3 ]", Until),
        ("P=? [ G ((F s=1) | (F (s=0 U s=2))) ]", GloballyAny),
    ])
    def test_patterns(self, text, pattern):
        assert isinstance(parse_property(text).path, pattern)

    @pytest.mark.parametrize("text", [
        "P=? [ X s=1 ]",
        "P=? [ F G s=1 ]",
        "P=? [ G (s=0 => F G s=1) ]",
        "P=? [ G ((F s=1) | s=2) ]",
    ])
    def test_unsupported(self, text):
        with pytest.raises(UnsupportedPattern):
            parse_property(text)

    def test_bound_outside_unit_interval(self):
        with pytest.raises(UnsupportedPattern):
            parse_property("P>=1.5 [ F s=1 ]")

    def test_unbound_atom_against_model(self):
        model = parse_model("dtmc module m s : [0..1] init 0; [] s=0 -> (s'=1); endmodule")
        with pytest.raises(UnboundAtomIdentifier):
            parse_property("P=? [ F t=1 ]", model=model)

    def test_labels_are_inlined_in_order(self):
        queries = parse_property_file(
            'label "one" = s=1;\n'
            'label "done" = "one" | s=2;\n'
            '"reach": P>=0.5 [ F "done" ];\n'
        )
        assert len(queries) == 1
        assert queries[0].name == "reach"
        assert queries[0].mode == "bound"
        assert queries[0].bound == 0.5
        assert queries[0].text == 'P>=0.5 [ F "done" ]'

    def test_file_queries_keep_source_text(self):
        queries = parse_property_file("P=? [ F s=1 ];\n\"two\": P<0.2 [ G\n    s!=2 ];\n")
        assert [q.text for q in queries] == ["P=? [ F s=1 ]", "P<0.2 [ G s!=2 ]"]
        assert [q.describe() for q in queries] == ["P=? [ F s=1 ]", "P<0.2 [ G s!=2 ]"]


class TestCheck:
    def test_eventually(self, coin_chain):
        result = check(coin_chain, parse_property("P=? [ F s=1 ]"))
        assert result.probability == pytest.approx(0.3, abs=1e-12)
        assert result.pattern == "Eventually"
        assert result.verdict is None

    def test_response_and_until(self, coin_chain):
        assert check(coin_chain, parse_property("P=? [ G (s=0 => F s=1) ]")).probability == pytest.approx(0.3)
        assert check(coin_chain, parse_property("P=? [ s<=0 U s=1 ]")).probability == pytest.approx(0.3)

    def test_next_safety(self, coin_chain):
        result = check(coin_chain, parse_property("P=? [ G (s=0 => !X s=1) ]"))
        assert result.probability == pytest.approx(0.7)

    def test_globally_any_covers_every_outcome(self, coin_chain):
        result = check(coin_chain, parse_property("P=? [ G ((F s=1) | (F s=2)) ]"))
        assert result.probability == pytest.approx(1.0)

    def test_globally_checks_absorbing_state(self, coin_chain):
        assert check(coin_chain, parse_property("P=? [ G s!=2 ]")).probability == pytest.approx(0.3)

    def test_bound_verdict(self, coin_chain):
        assert check(coin_chain, parse_property("P>=0.3 [ F s=1 ]")).verdict is True
        assert check(coin_chain, parse_property("P>0.3 [ F s=1 ]")).verdict is False
        assert check(coin_chain, parse_property("P<0.5 [ F s=1 ]")).verdict is True

    def test_exact_matches_vi(self, coin_chain):
        query = parse_property("P=? [ F s=2 ]")
        assert check(coin_chain, query, method="exact").probability == pytest.approx(
            check(coin_chain, query, method="vi").probability, abs=1e-12)

    def test_non_terminating_chain_rejected(self):
        loop = Chain.from_rows([[(1, 1.0)], [(0, 1.0)]])
        with pytest.raises(NonTerminatingChain):
            check(loop, parse_property("P=? [ F s=1 ]"))


def test_bound_holds_tolerance():
    assert bound_holds(">=", 0.95, 0.95 - 1e-13)
    assert not bound_holds(">=", 0.95, 0.9)
    assert bound_holds("<=", 0.1, 0.1 + 1e-13)
    assert not bound_holds(">", 0.5, 0.5)


class TestOracle:
    def test_coin(self, coin_chain):
        assert brute_force_prob(coin_chain, parse_property("P=? [ F s=1 ]")) == pytest.approx(0.3)

    def test_transient_cycle_has_no_finite_path_set(self):
        chain = Chain.from_rows([[(1, 1.0)], [(0, 0.5), (2, 0.5)], [(2, 1.0)]])
        with pytest.raises(PathCapExceeded):
            brute_force_prob(chain, parse_property("P=? [ F s=2 ]"))

    def test_path_cap(self):
        # 0 fans out to 5 states that each fan out to the absorbing pair
        rows = [[(i, 0.2) for i in range(1, 6)]]
        rows += [[(6, 0.5), (7, 0.5)] for _ in range(5)]
        rows += [[(6, 1.0)], [(7, 1.0)]]
        with pytest.raises(PathCapExceeded):
            brute_force_prob(Chain.from_rows(rows), parse_property("P=? [ F s=6 ]"), path_cap=4)

    def test_checker_agrees_on_random_dags(self):
        rng = np.random.default_rng(20240601)
        for _ in range(200):
            chain = random_dag(rng, int(rng.integers(2, 9)))
            for text in query_texts(rng, chain.n_states):
                query = parse_property(text)
                expected = brute_force_prob(chain, query)
                for method in ("vi", "exact"):
                    got = check(chain, query, method=method).probability
                    assert got == pytest.approx(expected, abs=1e-12), (text, method, chain.rows)


def test_value_iteration_matches_exact_solve():
    rng = np.random.default_rng(7)
    for _ in range(50):
        chain = random_cyclic(rng, 50, 5)
        targets = [45, 47]
        vi = solve_reachability(chain, targets, method="vi", residual=1e-14)
        exact = solve_reachability(chain, targets, method="exact")
        assert np.max(np.abs(vi.values - exact.values)) <= 1e-10
        assert exact.residual <= 1e-10


class TestMonitors:
    def monitor(self, text):
        return compile_monitor(parse_property(text).path)

    def test_response_obligation_discharged(self):
        monitor = self.monitor("P=? [ G (s=0 => F s=1) ]")
        assert monitor.accepts([(False, False), (True, False), (False, True)])
        assert not monitor.accepts([(False, False), (True, False), (False, False)])

    def test_next_safety_forbidden_successor(self):
        monitor = self.monitor("P=? [ G (s=0 => !X s=1) ]")
        assert not monitor.accepts([(True, False), (False, True)])
        assert monitor.accepts([(True, False), (False, False), (False, True)])

    def test_globally_any_rejects_unlisted_outcome(self):
        monitor = self.monitor("P=? [ G ((F s=1) | (F s=2) | (F (s=3 U s=4))) ]")
        # absorbed in a fifth outcome: no eventuality holds at the end
        assert not monitor.accepts([(False, False, False), (False, False, False)])
        assert monitor.accepts([(False, False, False), (False, False, True)])

    def test_until_and_globally_lassos(self):
        until = self.monitor("P=? [ s<=2 U s=3 ]")
        assert until.accepts([(True, False), (True, True)])
        assert not until.accepts([(True, False), (False, False)])
        globally = self.monitor("P=? [ G s!=2 ]")
        assert globally.accepts([(True,), (True,)])
        assert not globally.accepts([(True,), (False,)])

    def test_monitors_are_small(self):
        for text in query_texts(np.random.default_rng(3), 6):
            assert len(self.monitor(text).states) <= 4


class TestDuality:
    def test_random_chains(self):
        rng = np.random.default_rng(99)
        for _ in range(100):
            chain = random_dag(rng, int(rng.integers(2, 9)))
            a = int(rng.integers(0, chain.n_states))
            always = check(chain, parse_property(f"P=? [ G s<={a} ]")).probability
            escape = check(chain, parse_property(f"P=? [ F !(s<={a}) ]")).probability
            assert always == pytest.approx(1.0 - escape, abs=1e-12)

    @pytest.mark.parametrize("outcome", ["timedOut", "handoverSuccessful", "handoverUnsuccessful"])
    def test_refined_chain(self, refined_model, refined_chain, outcome):
        always = check(refined_chain, parse_property(f"P=? [ G robotState!={outcome} ]", model=refined_model),
                       model=refined_model).probability
        escape = check(refined_chain, parse_property(f"P=? [ F !(robotState!={outcome}) ]", model=refined_model),
                       model=refined_model).probability
        assert always == pytest.approx(1.0 - escape, abs=1e-12)


def shift_mass(chain: Chain, sources, target: int, fraction: float) -> Chain:
    """Move *fraction* of every source row onto the absorbing *target*"""
    rows = list(chain.rows)
    for source in sources:
        row = {t: p * (1.0 - fraction) for t, p in rows[source]}
        row[target] = row.get(target, 0.0) + fraction
        rows[source] = tuple(row.items())
    return replace(chain, rows=tuple(rows))


class TestMonotonicity:
    @pytest.mark.parametrize("goal", ["handoverSuccessful", "timedOut"])
    def test_refined_chain(self, refined_model, refined_chain, goal):
        query = parse_property(f"P=? [ F robotState={goal} ]", model=refined_model)
        base = check(refined_chain, query, model=refined_model).probability
        robot = refined_chain.var_index["robotState"]
        code = resolve_constants(refined_model)[goal]
        target = min(i for i in refined_chain.absorbing if refined_chain.states[i][robot] == code)
        transient = sorted(set(range(refined_chain.n_states)) - refined_chain.absorbing)
        rng = np.random.default_rng(11)
        for fraction in (0.001, 0.05, 0.5):
            sources = rng.choice(transient, size=min(25, len(transient)), replace=False).tolist()
            perturbed = shift_mass(refined_chain, sources, target, fraction)
            assert check(perturbed, query, model=refined_model).probability >= base - 1e-12

    def test_random_chains(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            chain = random_cyclic(rng, 30, 3)
            query = parse_property("P=? [ F s=28 ]")
            base = check(chain, query).probability
            perturbed = shift_mass(chain, rng.choice(27, size=5, replace=False).tolist(), 28, 0.2)
            assert check(perturbed, query).probability >= base - 1e-12
