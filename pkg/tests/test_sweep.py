from crowdegress.core import BehaviorParams
from crowdegress.sweep import SweepConfig, per_width_means, run_sweep, sweep_csv, sweep_summary_csv

SMALL = SweepConfig(corridor_width=9, corridor_length=12, crowd_size=60, params=BehaviorParams())


def test_rows_sorted_and_complete():
    runs = run_sweep([5, 1, 3], [2, 1], SMALL)
    assert [(r.width, r.seed) for r in runs] == [(1, 1), (1, 2), (3, 1), (3, 2), (5, 1), (5, 2)]
    assert len(sweep_csv(runs).splitlines()) == 7
    summary = sweep_summary_csv(runs).splitlines()
    assert summary[0].startswith("width,runs,") and [line.split(",")[:2] for line in summary[1:]] == \
        [["1", "2"], ["3", "2"], ["5", "2"]]


def test_parallel_matches_serial():
    serial = run_sweep([1, 3], [1, 2], SMALL)
    parallel = run_sweep([1, 3], [1, 2], SMALL, workers=2)
    assert sweep_csv(serial) == sweep_csv(parallel)


def test_keep_logs_and_means():
    runs = run_sweep([3], [1, 2], SMALL, keep_logs=True)
    assert all(r.log is not None and len(r.arches) == len(r.log.rows) for r in runs)
    means = per_width_means(runs)
    assert means[3]["total_egress_ticks"] == sum(r.summary.total_egress_ticks for r in runs) / 2


def test_full_width_list_row_count():
    runs = run_sweep([1, 3, 5, 7, 9, 11, 13], range(1, 11), SweepConfig(19, 6, 20))
    assert len(runs) == 70
