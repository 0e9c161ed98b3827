#!/usr/bin/env python3
"""Generates the bundled synthetic demo dataset (matches.csv, elo.csv).

Teams carry real country codes for flavour, but every score below is drawn
from a fixed random generator, not from historical results. The generating
process mirrors the engine's own match model so that fitted coefficients have
something true to converge to:

  stronger side:  goals ~ Poisson(exp(-1.3163 + 0.00243 * own_elo - 0.00145 * opp_elo))
  weaker side:    goals | g ~ Poisson(exp(-2.9 + 0.00243 * own_elo - 0.000728 * opp_elo + 0.137 * g))

"Stronger" means the higher per-match rating, which is the listed rating plus
uniform noise of up to +/-40 points; the noisy ratings are what the CSV
records, so the regressions see the covariate that actually drove each score.

The output also contains rows outside the default training window and rows on
non-neutral ground, which the fitting pipeline is expected to filter out.

Rerunning this script reproduces the committed CSVs byte for byte.
"""

import csv
import datetime
import pathlib

import numpy as np

HERE = pathlib.Path(__file__).resolve().parent

TEAMS = [
    # group A
    ("EGY", 1664), ("COD", 1581), ("UGA", 1440), ("ZWE", 1484),
    # group B
    ("NGA", 1717), ("GIN", 1536), ("MDG", 1478), ("BDI", 1417),
    # group C
    ("SEN", 1764), ("DZA", 1556), ("KEN", 1469), ("TZA", 1383),
    # group D
    ("MAR", 1706), ("CIV", 1612), ("ZAF", 1614), ("NAM", 1379),
    # group E
    ("TUN", 1642), ("MLI", 1543), ("MRT", 1290), ("AGO", 1480),
    # group F
    ("CMR", 1607), ("GHA", 1634), ("BEN", 1414), ("GNB", 1271),
]

ATTACK = (-1.3163, 0.00243, -0.00145)   # intercept, own elo, opponent elo
NESTED = (-2.9, 0.00243, -0.000728, 0.137)  # + opponent goals
ELO_NOISE = 40.0

WINDOW_START = datetime.date(2015, 1, 10)
WINDOW_END = datetime.date(2019, 3, 30)
POST_WINDOW_START = datetime.date(2019, 5, 1)
POST_WINDOW_END = datetime.date(2019, 7, 19)


def random_date(rng, start, end):
    span = (end - start).days
    return start + datetime.timedelta(days=int(rng.integers(0, span + 1)))


def play(rng, elo_a, elo_b):
    """Returns (goals_a, goals_b) for one match at the given noisy ratings."""
    if elo_a >= elo_b:
        strong, weak = elo_a, elo_b
    else:
        strong, weak = elo_b, elo_a
    lam = np.exp(ATTACK[0] + ATTACK[1] * strong + ATTACK[2] * weak)
    g_strong = int(rng.poisson(lam))
    mu = np.exp(NESTED[0] + NESTED[1] * weak + NESTED[2] * strong + NESTED[3] * g_strong)
    g_weak = int(rng.poisson(mu))
    if elo_a >= elo_b:
        return g_strong, g_weak
    return g_weak, g_strong


def main():
    rng = np.random.default_rng(20190621)
    rows = []

    def add_match(id_a, base_a, id_b, base_b, date, neutral):
        elo_a = round(base_a + rng.uniform(-ELO_NOISE, ELO_NOISE), 1)
        elo_b = round(base_b + rng.uniform(-ELO_NOISE, ELO_NOISE), 1)
        goals_a, goals_b = play(rng, elo_a, elo_b)
        if rng.uniform() < 0.5:
            id_a, id_b = id_b, id_a
            elo_a, elo_b = elo_b, elo_a
            goals_a, goals_b = goals_b, goals_a
        rows.append((date, id_a, id_b, goals_a, goals_b, elo_a, elo_b, neutral))

    # Two neutral-ground rounds of the full round robin inside the window.
    for _ in range(2):
        for i in range(len(TEAMS)):
            for j in range(i + 1, len(TEAMS)):
                date = random_date(rng, WINDOW_START, WINDOW_END)
                add_match(TEAMS[i][0], TEAMS[i][1], TEAMS[j][0], TEAMS[j][1], date, True)

    # Rows the training filter must drop: in-window but on home ground, and
    # neutral rows dated after the window closes.
    for _ in range(20):
        i, j = rng.choice(len(TEAMS), size=2, replace=False)
        date = random_date(rng, WINDOW_START, WINDOW_END)
        add_match(TEAMS[i][0], TEAMS[i][1], TEAMS[j][0], TEAMS[j][1], date, False)
    for _ in range(20):
        i, j = rng.choice(len(TEAMS), size=2, replace=False)
        date = random_date(rng, POST_WINDOW_START, POST_WINDOW_END)
        add_match(TEAMS[i][0], TEAMS[i][1], TEAMS[j][0], TEAMS[j][1], date, True)

    rows.sort(key=lambda r: (r[0], r[1], r[2]))

    with open(HERE / "matches.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["date", "team_a", "team_b", "goals_a", "goals_b", "elo_a", "elo_b", "neutral"])
        for date, a, b, ga, gb, ea, eb, neutral in rows:
            w.writerow([date.isoformat(), a, b, ga, gb, ea, eb, "true" if neutral else "false"])

    with open(HERE / "elo.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["team", "elo"])
        for team, elo in TEAMS:
            w.writerow([team, elo])

    print(f"wrote {len(rows)} matches for {len(TEAMS)} teams")


if __name__ == "__main__":
    main()
