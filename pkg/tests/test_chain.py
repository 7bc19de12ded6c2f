import json

import pytest

from chain import build_chain, chain_to_dict, classify_terminal, dump_chain
from chain.model import Chain
from errors import (
    ConflictingAssignment, DomainViolation, InvalidBranchProbabilities, NondeterministicState,
    StateSpaceLimitExceeded,
)
from modellang.parser import parse_model
from propcheck import brute_force_prob, check, parse_property

COIN = """
dtmc
const double p = 0.3;
module coin
  s : [0..2] init 0;
  [] s=0 -> p:(s'=1) + 1-p:(s'=2);
endmodule
"""

SYNC = """
dtmc
module a
  x : [0..1] init 0;
  [go] x=0 -> 0.5:(x'=1) + 0.5:(x'=0);
endmodule
module b
  y : [0..2] init 0;
  [go] y<2 -> (y'=y+1);
endmodule
"""

CHOICE = """
dtmc
module m
  s : [0..2] init 0;
  [] s=0 -> (s'=1);
  [] s=0 -> (s'=2);
endmodule
"""


def test_coin_chain():
    chain = build_chain(parse_model(COIN))
    assert chain.n_states == 3
    assert chain.variables == ("s",)
    assert chain.states[chain.initial] == (0,)
    row = dict(chain.successors(0))
    assert row[chain.index[(1,)]] == pytest.approx(0.3)
    assert row[chain.index[(2,)]] == pytest.approx(0.7)
    assert chain.absorbing == {chain.index[(1,)], chain.index[(2,)]}


def test_synchronised_commands_take_product():
    chain = build_chain(parse_model(SYNC))
    # (x, y): (0,0) → (1,1) | (0,1); (0,1) → (1,2) | (0,2); x=1 or y=2 blocks the label
    assert chain.n_states == 5
    assert dict(chain.successors(0)) == {chain.index[(1, 1)]: 0.5, chain.index[(0, 1)]: 0.5}
    assert classify_terminal(chain).terminating


def test_nondeterminism_rejected():
    with pytest.raises(NondeterministicState) as info:
        build_chain(parse_model(CHOICE))
    assert info.value.exit_code == 3


def test_uniform_scheduler():
    chain = build_chain(parse_model(CHOICE), policy="uniform")
    assert dict(chain.successors(0)) == {chain.index[(1,)]: 0.5, chain.index[(2,)]: 0.5}


def test_branch_probabilities_must_sum_to_one():
    with pytest.raises(InvalidBranchProbabilities):
        build_chain(parse_model("module m s : [0..2]; [] s=0 -> 0.5:(s'=1) + 0.4:(s'=2); endmodule"))


def test_update_outside_domain():
    with pytest.raises(DomainViolation):
        build_chain(parse_model("module m s : [0..1]; [] s<=1 -> (s'=s+1); endmodule"))


def test_conflicting_synchronised_writes():
    text = """
    module a x : [0..1]; [go] x=0 -> (x'=1); endmodule
    module b y : [0..1]; [go] y=0 -> (y'=1); endmodule
    """
    build_chain(parse_model(text))
    clash = parse_model(text.replace("(y'=1)", "(x'=1)"))
    with pytest.raises(ConflictingAssignment):
        build_chain(clash)


def test_state_cap():
    with pytest.raises(StateSpaceLimitExceeded):
        build_chain(parse_model("module m s : [0..50]; [] s<50 -> (s'=s+1); endmodule"), state_cap=10)


def test_self_loop_only_state_is_absorbing():
    chain = build_chain(parse_model("module m s : [0..1]; [] s=0 -> (s'=1); [] s=1 -> true; endmodule"))
    assert chain.absorbing == {chain.index[(1,)]}
    assert classify_terminal(chain).terminating


def test_cycle_is_not_terminating():
    loop = Chain.from_rows([[(1, 0.5), (2, 0.5)], [(2, 1.0)], [(1, 1.0)]])
    report = classify_terminal(loop)
    assert not report.terminating
    assert report.offending == ((1, 2),)


def test_dump(tmp_path, coin_chain):
    data = chain_to_dict(coin_chain)
    assert data["absorbing"] == [1, 2]
    assert data["stats"] == {"states": 3, "transitions": 4}
    dump_chain(coin_chain, tmp_path / "coin.json")
    assert json.loads((tmp_path / "coin.json").read_text())["rows"][0] == [[1, 0.3], [2, 0.7]]


def test_handover_chains_terminate(refined_chain, baseline_chain):
    assert classify_terminal(refined_chain).terminating
    assert classify_terminal(baseline_chain).terminating


def test_module_without_commands_is_one_absorbing_state():
    chain = build_chain(parse_model("module m s : [0..3] init 2; endmodule"))
    assert chain.n_states == 1
    assert chain.rows == (((0, 1.0),),)
    assert chain.absorbing == {0}


def test_synchronised_branch_probabilities_multiply():
    text = """
    module a x : [0..2]; [tick] x=0 -> 0.3:(x'=1) + 0.7:(x'=2); endmodule
    module b y : [0..2]; [tick] y=0 -> 0.5:(y'=1) + 0.5:(y'=2); endmodule
    """
    chain = build_chain(parse_model(text))
    assert sorted(p for _, p in chain.successors(0)) == pytest.approx([0.15, 0.15, 0.35, 0.35])


def test_refined_chain_ends_in_decisions_or_errors(refined_chain):
    robot = refined_chain.var_index["robotState"]
    final = {refined_chain.states[i][robot] for i in refined_chain.absorbing}
    # handoverSuccessful, handoverUnsuccessful, timedOut, motionError
    assert {1107, 1108, 1110} <= final <= {1107, 1108, 1109, 1110}


def test_guard_right_operand_not_evaluated_when_left_decides():
    model = parse_model("module m x : [0..2] init 0; [] x=0 -> (x'=2); [] x>0 & 10/x>6 -> (x'=0); endmodule")
    chain = build_chain(model)
    assert chain.states[chain.initial] == (0,)
    assert chain.absorbing == {chain.index[(2,)]}
    query = parse_property("P=? [ F x=2 ]", model=model)
    assert check(chain, query, model=model).probability == pytest.approx(1.0)
    assert brute_force_prob(chain, parse_property("P=? [ F (x>0 & 10/x>6) ]", model=model), model=model) == 0.0
    assert check(chain, parse_property("P=? [ F (x>0 & 10/x>6) ]", model=model), model=model).probability == 0.0
