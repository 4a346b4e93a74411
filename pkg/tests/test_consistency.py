import pytest

from dcmicro.consistency import ConsistencyReport, Verdict, consistency_loop
from dcmicro.jets import get_function

NAMES = ["class_fit", "dbar_extension", "fbi_decay"]


def test_report_agreement_flags():
    both = ConsistencyReport("u", 0.0, [Verdict("a", True, {}), Verdict("b", True, {})])
    mixed = ConsistencyReport("u", 0.0, [Verdict("a", True, {}), Verdict("b", False, {})])
    assert both.agree and both.all_pass and not both.all_fail
    assert not mixed.agree and not mixed.all_pass and not mixed.all_fail


@pytest.mark.parametrize("name", ["gevrey_bump", "rational", "gaussian"])
def test_class_members_pass_every_verdict(g2, name):
    rep = consistency_loop(get_function(name), g2)
    assert [v.name for v in rep.verdicts] == NAMES
    assert rep.all_pass, rep.to_dict()


def test_heaviside_fails_every_verdict_at_jump(g2):
    rep = consistency_loop(get_function("heaviside"), g2)
    assert rep.all_fail and rep.agree, rep.to_dict()


def test_heaviside_passes_away_from_jump(g2):
    rep = consistency_loop(get_function("heaviside"), g2, point=0.5, radius=0.2)
    assert rep.all_pass, rep.to_dict()


def test_two_variable_input_rejected(g2):
    with pytest.raises(ValueError):
        consistency_loop(get_function("gaussian2"), g2)


def test_report_serializes(g2):
    d = consistency_loop(get_function("gevrey_bump"), g2).to_dict()
    assert d["all_pass"] and [v["name"] for v in d["verdicts"]] == NAMES
