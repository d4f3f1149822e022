"""Spectra of evolution matrices: eigenvalues, clusters and convergence sweeps."""

from spectra.clusters import DEFAULT_CLUSTER_TOL, Cluster, Match, cluster, dominant_cluster, match_dominant
from spectra.convergence import ConvergenceRow, ConvergenceTable, convergence_sweep, order_estimate
from spectra.eig import Spectrum, StabilitySummary, eig_dense, stability_summary
