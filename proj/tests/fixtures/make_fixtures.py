#!/usr/bin/env python3
"""Regenerates the bundled demo fixtures.

The fixture set encodes published aggregate results for three 2021 US
vaccine-uptake trackers (a large social-media panel, a mid-size federal
survey, and a small classical online panel) against a cumulative national
benchmark count. All values are frozen into CSVs; this script exists so the
fixtures stay reproducible and self-documenting.
"""

import os

HERE = os.path.dirname(os.path.abspath(__file__))
ADULTS = 255_000_000

# Benchmark anchors: (date, proportion of adults with at least one dose).
ANCHORS = [
    ("2021-01-01", 0.010),
    ("2021-01-09", 0.023),
    ("2021-01-18", 0.040),
    ("2021-02-01", 0.065),
    ("2021-02-15", 0.100),
    ("2021-03-01", 0.150),
    ("2021-03-20", 0.352),
    ("2021-03-27", 0.378),
    ("2021-03-29", 0.385),
    ("2021-04-12", 0.470),
    ("2021-04-26", 0.528),
    ("2021-05-01", 0.541),
    ("2021-05-08", 0.553),
    ("2021-05-10", 0.557),
    ("2021-05-15", 0.570),
    ("2021-05-17", 0.572),
    ("2021-05-31", 0.585),
]


def to_ordinal(iso):
    import datetime

    return datetime.date.fromisoformat(iso).toordinal()


def from_ordinal(o):
    import datetime

    return datetime.date.fromordinal(o).isoformat()


def benchmark_series():
    """Daily integer counts, linear between anchors, monotone."""
    series = []
    prev_count = 0
    for (d0, p0), (d1, p1) in zip(ANCHORS, ANCHORS[1:]):
        o0, o1 = to_ordinal(d0), to_ordinal(d1)
        for o in range(o0, o1):
            frac = (o - o0) / (o1 - o0)
            p = p0 + (p1 - p0) * frac
            count = max(prev_count, round(p * ADULTS))
            series.append((from_ordinal(o), count))
            prev_count = count
    last_date, last_p = ANCHORS[-1]
    series.append((last_date, max(prev_count, round(last_p * ADULTS))))
    return series


def benchmark_at(series, iso):
    best = None
    for d, c in series:
        if d <= iso:
            best = c
    if best is None:
        raise ValueError(iso)
    return best / ADULTS


def write_csv(name, header, rows):
    path = os.path.join(HERE, name)
    with open(path, "w", newline="") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(str(x) for x in row) + "\n")
    print("wrote", path)


def se_for(est, deff, n):
    import math

    return math.sqrt(est * (1 - est) * deff / n)


def wave_rows(series, survey_id, ends, lengths, ns, errors, deffs):
    rows = []
    for end, n, err, deff in zip(ends, ns, errors, deffs):
        start = from_ordinal(to_ordinal(end) - lengths + 1)
        est = benchmark_at(series, end) + err
        se = se_for(est, deff, n)
        rows.append(
            (survey_id, start, end, n, f"{est:.6f}", f"{se:.6f}", f"{deff:.6f}", "")
        )
    return rows


def main():
    series = benchmark_series()
    write_csv("cdc_benchmark.csv", ["date", "cumulative_count"], series)

    # Large social-media panel: 19 weekly waves, n summing to 4,525,633.
    fb_ends = [
        "2021-01-09", "2021-01-16", "2021-01-23", "2021-01-30",
        "2021-02-06", "2021-02-13", "2021-02-20", "2021-02-27",
        "2021-03-06", "2021-03-13", "2021-03-20", "2021-03-27",
        "2021-04-03", "2021-04-10", "2021-04-17", "2021-04-24",
        "2021-05-01", "2021-05-08", "2021-05-15",
    ]
    fb_errors = [
        0.020, 0.025, 0.031, 0.038, 0.046, 0.055, 0.065, 0.076, 0.087, 0.098,
        0.108, 0.112, 0.118, 0.125, 0.133, 0.142, 0.152, 0.161, 0.170,
    ]
    fb_ns = [
        183_411, 215_220, 229_855, 241_339, 248_206, 252_880, 255_964, 257_320,
        256_113, 253_045, 249_954, 181_949, 264_820, 262_707, 258_711, 254_526,
        249_330, 240_617, 169_666,
    ]
    assert sum(fb_ns) == 4_525_633, sum(fb_ns)
    fb_deffs = [1.48] * 19
    write_csv(
        "fb_waves.csv",
        ["survey_id", "wave_start", "wave_end", "n", "estimate", "se", "design_effect", "cv_w"],
        wave_rows(series, "delphi-facebook", fb_ends, 7, fb_ns, fb_errors, fb_deffs),
    )

    # Mid-size federal survey: 8 two-week waves, n summing to 606,615.
    hp_ends = [
        "2021-01-18", "2021-02-01", "2021-02-15", "2021-03-01",
        "2021-03-15", "2021-03-29", "2021-04-26", "2021-05-10",
    ]
    hp_errors = [0.025, 0.032, 0.040, 0.052, 0.065, 0.080, 0.115, 0.140]
    hp_ns = [68_348, 77_122, 75_962, 76_961, 78_306, 76_068, 78_848, 75_000]
    assert sum(hp_ns) == 606_615, sum(hp_ns)
    hp_deffs = [4.4, 4.5, 4.5, 4.6, 4.7, 4.8, 4.7, 4.6]
    write_csv(
        "hp_waves.csv",
        ["survey_id", "wave_start", "wave_end", "n", "estimate", "se", "design_effect", "cv_w"],
        wave_rows(series, "census-household-pulse", hp_ends, 14, hp_ns, hp_errors, hp_deffs),
    )

    # Small classical online panel: 11 waves, n summing to 11,421.
    ax_ends = [
        "2021-01-11", "2021-01-25", "2021-02-08", "2021-02-22", "2021-03-08",
        "2021-03-22", "2021-04-05", "2021-04-19", "2021-05-03", "2021-05-17",
        "2021-05-31",
    ]
    ax_errors = [0.010, -0.008, 0.006, -0.005, 0.012, 0.007, 0.015, 0.020, 0.028, 0.042, 0.038]
    ax_ns = [1071, 1022, 1038, 1035, 1083, 995, 1048, 1033, 1040, 1029, 1027]
    assert sum(ax_ns) == 11_421, sum(ax_ns)
    ax_deffs = [1.12, 1.18, 1.15, 1.20, 1.10, 1.14, 1.16, 1.13, 1.17, 1.19, 1.15]
    write_csv(
        "ax_waves.csv",
        ["survey_id", "wave_start", "wave_end", "n", "estimate", "se", "design_effect", "cv_w"],
        wave_rows(series, "axios-ipsos", ax_ends, 4, ax_ns, ax_errors, ax_deffs),
    )

    # Outcome triples for the social-media panel (uptake / willing / hesitant).
    hes = [
        0.300, 0.293, 0.286, 0.279, 0.272, 0.264, 0.256, 0.247, 0.238, 0.228,
        0.218, 0.208, 0.198, 0.189, 0.181, 0.174, 0.168, 0.163, 0.160,
    ]
    rows = []
    for end, n, err, h in zip(fb_ends, fb_ns, fb_errors, hes):
        start = from_ordinal(to_ordinal(end) - 6)
        v = benchmark_at(series, end) + err
        w = 1.0 - v - h
        rows.append(
            ("delphi-facebook", start, end, n, f"{v:.6f}", f"{w:.6f}", f"{h:.6f}", "1.480000", "")
        )
    write_csv(
        "fb_outcomes.csv",
        ["survey_id", "wave_start", "wave_end", "n", "vaccinated", "willing", "hesitant",
         "design_effect", "cv_w"],
        rows,
    )

    # Weighted sample composition vs. a population benchmark.
    write_csv(
        "fb_composition_weighted.csv",
        ["dimension", "category", "share"],
        [
            ("education", "high_school", "0.21"),
            ("education", "some_college", "0.36"),
            ("education", "four_year_college", "0.25"),
            ("education", "post_graduate", "0.18"),
            ("race_ethnicity", "white", "0.68"),
            ("race_ethnicity", "black", "0.06"),
            ("race_ethnicity", "hispanic", "0.16"),
            ("race_ethnicity", "asian", "0.03"),
            ("race_ethnicity", "other", "0.07"),
        ],
    )
    write_csv(
        "acs_composition.csv",
        ["dimension", "category", "share"],
        [
            ("education", "high_school", "0.39"),
            ("education", "some_college", "0.30"),
            ("education", "four_year_college", "0.19"),
            ("education", "post_graduate", "0.11"),
            ("race_ethnicity", "white", "0.60"),
            ("race_ethnicity", "black", "0.12"),
            ("race_ethnicity", "hispanic", "0.16"),
            ("race_ethnicity", "asian", "0.06"),
            ("race_ethnicity", "other", "0.06"),
        ],
    )

    # All-ages totals plus age-split dose reports for the imputation demo.
    impute_dates = ["2021-01-15", "2021-02-01", "2021-03-01", "2021-04-01",
                    "2021-05-01", "2021-05-15"]
    adult_share = {"2021-01-15": 0.975, "2021-02-01": 0.970, "2021-03-01": 0.965,
                   "2021-04-01": 0.955, "2021-05-01": 0.930, "2021-05-15": 0.915}
    totals_rows = []
    ages_rows = []
    for d in impute_dates:
        adult_count = benchmark_at(series, d) * ADULTS
        total = round(adult_count / adult_share[d])
        totals_rows.append((d, total))
        # Two reporting jurisdictions with an age split, one without.
        share = adult_share[d]
        east = round(total * 0.4)
        west = round(total * 0.35)
        ages_rows.append((d, "east", "adult", round(east * share)))
        ages_rows.append((d, "east", "minor", east - round(east * share)))
        ages_rows.append((d, "west", "adult", round(west * share)))
        ages_rows.append((d, "west", "minor", west - round(west * share)))
        ages_rows.append((d, "gulf", "adult", round(total * 0.2)))
    write_csv("cdc_totals.csv", ["date", "cumulative_count"], totals_rows)
    write_csv(
        "cdc_age_doses.csv",
        ["date", "jurisdiction", "age_group", "cumulative_doses"],
        ages_rows,
    )

    # Snapshot series for the revision-lag demo: the same ten April days as
    # first reported and as revised in three later snapshots.
    april_days = [from_ordinal(to_ordinal("2021-04-03") + i) for i in range(10)]
    first_counts = {d: benchmark_at(series, d) * ADULTS for d in april_days}
    snapshots = {
        "2021-04-12": 1.000,
        "2021-04-21": 1.035,
        "2021-05-05": 1.050,
        "2021-05-26": 1.058,
    }
    for as_of, inflation in snapshots.items():
        rows = [(d, round(first_counts[d] * inflation)) for d in april_days]
        write_csv(f"cdc_snapshot_{as_of}.csv", ["date", "cumulative_count"], rows)


if __name__ == "__main__":
    main()
