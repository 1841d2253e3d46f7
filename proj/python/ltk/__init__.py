"""Decision procedures for the temporal-epistemic logic LTK_r."""

import json

from . import _ltk
from ._ltk import ModelError, ParseError, equivalid, normalize_formula, normalize_rule

__all__ = [
    "ModelError",
    "ParseError",
    "admissible",
    "charmodel",
    "check_witness",
    "equivalid",
    "model_check",
    "normal_form",
    "normalize_formula",
    "normalize_rule",
    "refute",
    "theorem",
]


def normal_form(rule, agents=1, max_thetas=4096):
    return json.loads(_ltk.normal_form(rule, agents, max_thetas))


def admissible(rule, agents=1, max_d=None, max_cluster=None, max_tail=None, cond5="model", jobs=1):
    """Verdict dict; a "witness" entry is present when the rule is not admissible."""
    return json.loads(_ltk.admissible(rule, agents, max_d, max_cluster, max_tail, cond5, jobs))


def theorem(formula, agents=1, max_d=None, max_cluster=None, max_tail=None, cond5="model", jobs=1):
    return json.loads(_ltk.theorem(formula, agents, max_d, max_cluster, max_tail, cond5, jobs))


def check_witness(rule, witness, agents=1, cond5="model"):
    # accepts the witness dict, a full admissible() result, or JSON text
    if not isinstance(witness, str):
        witness = json.dumps(witness)
    return json.loads(_ltk.check_witness(rule, witness, agents, cond5))


def model_check(model, formula):
    if not isinstance(model, str):
        model = json.dumps(model)
    return json.loads(_ltk.model_check(model, formula))


def charmodel(vars=1, max_cluster=2, agents=1, depth=2, step2_all=False):
    return json.loads(_ltk.charmodel(vars, max_cluster, agents, depth, step2_all))


def refute(formula, agents=1, max_clusters=3, max_size=2):
    return json.loads(_ltk.refute(formula, agents, max_clusters, max_size))
