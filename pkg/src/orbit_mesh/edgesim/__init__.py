from orbit_mesh.edgesim.report import SimulationReport, quantile, render_report
from orbit_mesh.edgesim.runner import run_cohort
from orbit_mesh.edgesim.scripts import ParticipantScript, load_scripts

__all__ = ["ParticipantScript", "SimulationReport", "load_scripts", "quantile",
           "render_report", "run_cohort"]
