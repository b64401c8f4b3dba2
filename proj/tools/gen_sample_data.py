#!/usr/bin/env python3
"""Regenerates the bundled sample datasets under data/.

The files are synthetic stand-ins shaped like three classic UCI tasks
(heart, breast-w, voting): same row counts, feature names, domains, and
roughly the published class balances. Signal strength and label noise are
tuned so the induction pipeline lands near its reference metrics. Only the
standard library is used and everything is seeded, so reruns are
byte-identical.
"""

import argparse
import json
import random
from pathlib import Path


def flip_labels(rng, latent, flips_per_class):
    """Count-preserving noise: swaps `flips_per_class` labels in each
    direction, so class totals stay fixed."""
    labels = list(latent)
    pos = [i for i, v in enumerate(labels) if v]
    neg = [i for i, v in enumerate(labels) if not v]
    for i in rng.sample(pos, flips_per_class):
        labels[i] = False
    for i in rng.sample(neg, flips_per_class):
        labels[i] = True
    return labels


def pick(rng, table):
    r = rng.random()
    acc = 0.0
    for value, p in table:
        acc += p
        if r < acc:
            return value
    return table[-1][0]


def clipped_gauss(rng, mu, sigma, lo, hi, digits=0):
    v = max(lo, min(hi, rng.gauss(mu, sigma)))
    return round(v, digits) if digits else int(round(v))


def write_csv(path, header, rows):
    lines = [",".join(header)]
    lines += [",".join(str(c) for c in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def write_schema(path, features, label, positive, id_column):
    spec = {
        "features": [
            {"name": n, "kind": k, **({"domain": d} if d else {})} for n, k, d in features
        ],
        "label": label,
        "positive_label": positive,
        "id_column": id_column,
    }
    path.write_text(json.dumps(spec, indent=2) + "\n")


def gen_heart(out, seed):
    rng = random.Random(seed)
    n_pos, n_neg = 120, 150
    latent = [True] * n_pos + [False] * n_neg
    rng.shuffle(latent)
    labels = flip_labels(rng, latent, flips_per_class=12)

    rows = []
    for i, (is_pos, label) in enumerate(zip(latent, labels), start=1):
        # Disease severity drives every column, so feature values co-occur in
        # coherent profiles the way they do in real cardiology data.
        z = 0.62 + 0.34 * rng.random() if is_pos else 0.04 + 0.34 * rng.random()
        chest_pain = pick(rng, [("4", 0.08 + 0.78 * z), ("3", 0.42 - 0.36 * z),
                                ("2", 0.30 - 0.25 * z), ("1", 0.20 - 0.17 * z)])
        thal = pick(rng, [("7", 0.06 + 0.68 * z), ("3", 0.78 - 0.66 * z),
                          ("6", 0.16 - 0.02 * z)])
        slope = pick(rng, [("2", 0.18 + 0.54 * z), ("1", 0.70 - 0.52 * z),
                           ("3", 0.12 - 0.02 * z)])
        vessels = pick(rng, [("0", 0.80 - 0.64 * z), ("1", 0.13 + 0.17 * z),
                             ("2", 0.05 + 0.22 * z), ("3", 0.02 + 0.25 * z)])
        sex = pick(rng, [("1", 0.45 + 0.26 * z), ("0", 0.55 - 0.26 * z)])
        exang = pick(rng, [("1", 0.10 + 0.58 * z), ("0", 0.90 - 0.58 * z)])
        fbs = pick(rng, [("1", 0.11 + 0.07 * z), ("0", 0.89 - 0.07 * z)])
        ecg = pick(rng, [("2", 0.32 + 0.28 * z), ("1", 0.04), ("0", 0.64 - 0.28 * z)])
        bp = clipped_gauss(rng, 120 + 22 * z, 15, 94, 200)
        chol = clipped_gauss(rng, 228 + 34 * z, 42, 126, 409)
        thalach = clipped_gauss(rng, 162 - 28 * z, 16, 88, 202)
        oldpeak = round(min(6.0, max(0.0, rng.gauss(0.3 + 1.8 * z, 0.55))), 1)
        age = clipped_gauss(rng, 50 + 8 * z, 8, 29, 77)
        rows.append([i, age, sex, chest_pain, bp, chol, fbs, ecg, thalach, exang, oldpeak,
                     slope, vessels, thal, "present" if label else "absent"])

    write_csv(out / "heart.csv",
              ["id", "age", "sex", "chest_pain", "blood_pressure", "serum_cholestoral",
               "fasting_blood_sugar", "resting_ecg", "max_heart_rate", "exang", "oldpeak",
               "slope", "major_vessels", "thal", "heart_disease"],
              rows)
    write_schema(out / "heart.schema.json",
                 [("age", "numeric", None),
                  ("sex", "categorical", ["0", "1"]),
                  ("chest_pain", "categorical", ["1", "2", "3", "4"]),
                  ("blood_pressure", "numeric", None),
                  ("serum_cholestoral", "numeric", None),
                  ("fasting_blood_sugar", "categorical", ["0", "1"]),
                  ("resting_ecg", "categorical", ["0", "1", "2"]),
                  ("max_heart_rate", "numeric", None),
                  ("exang", "categorical", ["0", "1"]),
                  ("oldpeak", "numeric", None),
                  ("slope", "categorical", ["1", "2", "3"]),
                  ("major_vessels", "categorical", ["0", "1", "2", "3"]),
                  ("thal", "categorical", ["3", "6", "7"])],
                 "heart_disease", "present", "id")


def gen_breast_w(out, seed):
    rng = random.Random(seed)
    n_pos, n_neg = 241, 458
    latent = [True] * n_pos + [False] * n_neg
    rng.shuffle(latent)
    labels = flip_labels(rng, latent, flips_per_class=9)

    feature_mu = [
        ("clump_thickness", 7.0, 2.9),
        ("cell_size_uniformity", 6.6, 2.7),
        ("cell_shape_uniformity", 6.6, 2.6),
        ("marginal_adhesion", 5.6, 3.2),
        ("single_epi_cell_size", 5.3, 2.5),
        ("bare_nuclei", 7.6, 3.1),
        ("bland_chromatin", 6.0, 2.3),
        ("normal_nucleoli", 5.9, 3.4),
        ("mitoses", 2.6, 2.5),
    ]
    benign_mu = {
        "clump_thickness": (2.9, 1.6),
        "cell_size_uniformity": (1.3, 0.9),
        "cell_shape_uniformity": (1.4, 1.0),
        "marginal_adhesion": (1.4, 1.0),
        "single_epi_cell_size": (2.1, 0.9),
        "bare_nuclei": (1.3, 1.2),
        "bland_chromatin": (2.1, 1.1),
        "normal_nucleoli": (1.3, 1.0),
        "mitoses": (1.1, 0.5),
    }
    rows = []
    missing_budget = 16  # bare_nuclei cells left blank, like the original
    for i, (is_pos, label) in enumerate(zip(latent, labels), start=1):
        row = [i]
        for name, mu, sigma in feature_mu:
            if not is_pos:
                mu, sigma = benign_mu[name]
            value = clipped_gauss(rng, mu, sigma, 1, 10)
            if name == "bare_nuclei" and missing_budget > 0 and rng.random() < 0.024:
                value = "?"
                missing_budget -= 1
            row.append(value)
        row.append("true" if label else "false")
        rows.append(row)

    write_csv(out / "breast-w.csv",
              ["id"] + [name for name, _, _ in feature_mu] + ["malignant"],
              rows)
    write_schema(out / "breast-w.schema.json",
                 [(name, "numeric", None) for name, _, _ in feature_mu],
                 "malignant", "true", "id")


def gen_voting(out, seed):
    rng = random.Random(seed)
    n_pos, n_neg = 267, 168  # democrat, republican
    latent = [True] * n_pos + [False] * n_neg
    rng.shuffle(latent)
    labels = flip_labels(rng, latent, flips_per_class=5)

    # (issue, P(y | democrat), P(y | republican)); the rest of the mass is
    # split between "n" and a small "unknown" share.
    issues = [
        ("handicapped_infants", 0.60, 0.19),
        ("water_project_cost_sharing", 0.50, 0.51),
        ("adoption_of_the_budget_resolution", 0.85, 0.13),
        ("physician_fee_freeze", 0.05, 0.92),
        ("el_salvador_aid", 0.21, 0.90),
        ("religious_groups_in_schools", 0.47, 0.86),
        ("anti_satellite_test_ban", 0.77, 0.24),
        ("aid_to_nicaraguan_contras", 0.82, 0.15),
        ("mx_missile", 0.76, 0.11),
        ("immigration", 0.47, 0.55),
        ("synfuels_corporation_cutback", 0.50, 0.13),
        ("education_spending", 0.14, 0.81),
        ("superfund_right_to_sue", 0.29, 0.86),
        ("crime", 0.35, 0.90),
        ("duty_free_exports", 0.63, 0.09),
        ("export_administration_act_south_africa", 0.85, 0.66),
    ]
    unknown_p = 0.04
    rows = []
    for is_pos, label in zip(latent, labels):
        row = []
        for _, p_dem, p_rep in issues:
            p_yes = p_dem if is_pos else p_rep
            row.append(pick(rng, [("y", p_yes * (1 - unknown_p)),
                                  ("unknown", unknown_p),
                                  ("n", 1.0)]))
        row.append("yes" if label else "no")
        rows.append(row)

    write_csv(out / "voting.csv", [name for name, _, _ in issues] + ["democrat"], rows)
    write_schema(out / "voting.schema.json",
                 [(name, "categorical", ["y", "n", "unknown"]) for name, _, _ in issues],
                 "democrat", "yes", None)


TWEETY = """B:
bird(X) :- penguin(X).
bird(tweety). bird(et).
cat(kitty). penguin(polly).
E+:
fly(tweety). fly(et).
E-:
fly(kitty). fly(polly).
"""


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="data", type=Path)
    ap.add_argument("--seed", default=20240, type=int)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    gen_heart(args.out, args.seed)
    gen_breast_w(args.out, args.seed + 1)
    gen_voting(args.out, args.seed + 2)
    (args.out / "tweety.pl").write_text(TWEETY)
    print(f"wrote heart, breast-w, voting, tweety under {args.out}/")


if __name__ == "__main__":
    main()
