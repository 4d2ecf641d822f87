"""Exact block Markov chains, tree Markov chains and Markov random fields on finite trees."""

from .bmc import BlockKernel, BmcSpec, block_transition, global_block_conditional, n_step_block, realize
from .chains import (
    ChainSpec,
    chain_as_bmc,
    counterexample_fixture,
    counterexample_tree,
    counterexample_values,
    embed_chain,
    product_mc_spec,
)
from .classify import (
    ClassReport,
    check_children_cond_indep,
    check_future_independence,
    check_mc,
    check_mrf,
    check_obmc,
    check_parent_window,
    check_product_form,
    classify_all,
)
from .errors import (
    BmcTreeError,
    ConfigurationError,
    InclusionViolation,
    MarkovPropertyError,
    NullEventError,
    SchemaError,
    SpecError,
    TreeError,
)
from .measure import JointMeasure, chain_rule_check, compare_conditionals, conditional_independence
from .tree import RootedTree
from .verdict import Verdict, Witness

__version__ = "0.1.0"

__all__ = [
    "BlockKernel",
    "BmcSpec",
    "block_transition",
    "global_block_conditional",
    "n_step_block",
    "realize",
    "ChainSpec",
    "chain_as_bmc",
    "counterexample_fixture",
    "counterexample_tree",
    "counterexample_values",
    "embed_chain",
    "product_mc_spec",
    "ClassReport",
    "check_children_cond_indep",
    "check_future_independence",
    "check_mc",
    "check_mrf",
    "check_obmc",
    "check_parent_window",
    "check_product_form",
    "classify_all",
    "BmcTreeError",
    "ConfigurationError",
    "InclusionViolation",
    "MarkovPropertyError",
    "NullEventError",
    "SchemaError",
    "SpecError",
    "TreeError",
    "JointMeasure",
    "chain_rule_check",
    "compare_conditionals",
    "conditional_independence",
    "RootedTree",
    "Verdict",
    "Witness",
]
