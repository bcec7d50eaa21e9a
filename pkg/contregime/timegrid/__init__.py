from contregime.timegrid.partition import (Partition, make_partition,
                                           refine)
from contregime.timegrid.trajectory import (Cohort, HistoryView, Trajectory,
                                            history_at, summarize)

__all__ = ["Partition", "make_partition", "refine", "Cohort", "HistoryView",
           "Trajectory", "history_at", "summarize"]
