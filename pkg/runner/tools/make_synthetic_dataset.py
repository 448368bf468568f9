"""Generate the synthetic stand-in for the heart-failure clinical records.

The real 299-patient table is public but cannot be fetched from inside the
build sandbox, so tests run the full protocol against this stand-in: same
column names, same shape (299 rows, 13 features), same 96/203 class split,
and marginals close to the published descriptive statistics. The label
depends on a noisy risk score over the clinically predictive columns
(ejection fraction, serum creatinine, age, serum sodium, follow-up time),
tuned so a linear classifier lands in roughly the same F1 region as the
published reference run.

Deterministic: a fixed seed always reproduces the committed CSV.

Run: python3 runner/tools/make_synthetic_dataset.py <out.csv>
"""

import sys
from pathlib import Path

import numpy as np
import pandas as pd

ROWS = 299
POSITIVES = 96
SEED = 20200604  # the real study's publication year/month/day
RISK_NOISE = 1.1


def generate(seed: int = SEED) -> pd.DataFrame:
    rng = np.random.default_rng(seed)

    age = np.clip(rng.normal(60.8, 11.9, ROWS), 40, 95).round(0)
    anaemia = (rng.random(ROWS) < 0.431).astype(int)
    cpk = np.clip(rng.lognormal(5.5, 1.0, ROWS), 23, 7861).round(0)
    diabetes = (rng.random(ROWS) < 0.418).astype(int)
    ejection_fraction = np.clip(rng.normal(38.1, 11.8, ROWS), 14, 80).round(0)
    high_blood_pressure = (rng.random(ROWS) < 0.351).astype(int)
    platelets = np.clip(rng.normal(263358, 97804, ROWS), 25100, 850000).round(2)
    serum_creatinine = np.clip(rng.lognormal(0.09, 0.45, ROWS), 0.5, 9.4).round(1)
    serum_sodium = np.clip(rng.normal(136.6, 4.4, ROWS), 113, 148).round(0)
    sex = (rng.random(ROWS) < 0.649).astype(int)
    smoking = (rng.random(ROWS) < 0.321).astype(int)
    time = np.clip(rng.uniform(4, 285, ROWS), 4, 285).round(0)

    risk = (
        0.055 * (age - 60.8)
        - 0.085 * (ejection_fraction - 38.1)
        + 1.25 * (serum_creatinine - 1.4)
        - 0.09 * (serum_sodium - 136.6)
        - 0.0125 * (time - 130.0)
        + rng.normal(0.0, RISK_NOISE, ROWS)
    )
    # Exactly the published class balance: the riskiest 96 patients die.
    order = np.argsort(-risk)
    death = np.zeros(ROWS, dtype=int)
    death[order[:POSITIVES]] = 1

    return pd.DataFrame(
        {
            "age": age,
            "anaemia": anaemia,
            "creatinine_phosphokinase": cpk,
            "diabetes": diabetes,
            "ejection_fraction": ejection_fraction,
            "high_blood_pressure": high_blood_pressure,
            "platelets": platelets,
            "serum_creatinine": serum_creatinine,
            "serum_sodium": serum_sodium,
            "sex": sex,
            "smoking": smoking,
            "time": time,
            "DEATH_EVENT": death,
        }
    )


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("synthetic_heart_failure.csv")
    frame = generate()
    frame.to_csv(out, index=False)
    print(f"{out}: {len(frame)} rows, {int(frame.DEATH_EVENT.sum())} positives")


if __name__ == "__main__":
    main()
