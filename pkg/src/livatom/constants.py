"""Default physical constants (CODATA 2018); overridable through run config."""

HARTREE_EV = 27.211386245988
BOHR_M = 5.29177210903e-11

DEFAULT_ACCURACY_EV = 1e-12
ACCURACY_SOURCE = "Essen et al., Nature 229 (1971) 110"
