import csv
from typing import TextIO, Sequence

from ..dto import TrajectoryOutcome, EmpiricalPMF


def write_trajectory_csv(stream: TextIO, species: Sequence[str], outcome: TrajectoryOutcome):
    """Columns: time, then one count per species."""
    writer = csv.writer(stream)
    writer.writerow(["time", *species])
    for time, state in outcome.path or ((outcome.time, outcome.state),):
        writer.writerow([repr(time), *state])


def write_pmf_csv(stream: TextIO, pmf: EmpiricalPMF):
    writer = csv.writer(stream)
    writer.writerow(["x", "probability", "tail"])
    tail = pmf.survival()
    for x, p in pmf.probabilities.items():
        writer.writerow([x, repr(p), repr(tail[x])])
