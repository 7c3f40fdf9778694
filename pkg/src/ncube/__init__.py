"""Solvability of the n x n x n cube: simulation, exact counts and a group oracle."""
from .codec import AssemblyModel, Configuration, assemble, extract, observable, sample_configuration
from .counting import conf_cardinality, group_order, orbit_count, solvability_probability
from .engine import Permutation, apply, compile, cycle_structure, generator_permutation, sign_on_class
from .geometry import Layout, build_layout
from .law import Verdict, validate, validate_observable
from .notation import named_move, parse, render

__version__ = "0.1.0"
