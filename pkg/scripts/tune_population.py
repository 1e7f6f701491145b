"""Dev tool: measure acceptance-relevant statistics for candidate
bundled-population specs.  Not part of the package."""

import json
import sys
import time

sys.path.insert(0, "src")

from strokes.analytics import consistency_summary
from strokes.learners import ModelSpec, Family, evaluate_cell, best_single_source_accuracy
from strokes.simulate import CorrelationSpecification, SimConfig, simulate
from strokes.survey import Group


def measure(spec_dict, seed, n=311, c=0.9, full=False):
    spec = CorrelationSpecification.from_json_dict(spec_dict)
    ds = simulate(SimConfig(n_subjects=n, seed=seed, spec=spec, seed_consistency=c))
    s = consistency_summary(ds)
    svm = ModelSpec(family=Family.LINEAR_SVM)
    t0 = time.time()
    aa = evaluate_cell(ds, Group.ART, Group.ART, svm, bootstrap_samples=10)
    ua = evaluate_cell(ds, Group.UNION, Group.ART, svm, bootstrap_samples=10)
    r5 = evaluate_cell(ds, Group.ART, Group.ART, svm, reduced5=True, bootstrap_samples=10)
    bss = best_single_source_accuracy(ds, Group.ART)
    out = {
        "seed": hex(seed),
        "agree": round(s.agreement_rate, 4),
        "seed3": round(s.seed3_accuracy, 4),
        "default": round(s.default_rate, 4),
        "A->A": round(aa.mean_accuracy, 4),
        "U->A": round(ua.mean_accuracy, 4),
        "r5": round(r5.mean_accuracy, 4),
        "bss": round(bss, 4),
        "U>=A": ua.mean_accuracy >= aa.mean_accuracy,
        "drop_pts": round((aa.mean_accuracy - r5.mean_accuracy) * 100, 2),
        "secs": round(time.time() - t0),
    }
    if full:
        for fam in (Family.NEAREST_NEIGHBOR, Family.DECISION_TREE, Family.MATRIX_COMPLETION,
                    Family.LOGISTIC_REGRESSION):
            al = evaluate_cell(ds, Group.ART, Group.LIFE, ModelSpec(family=fam), bootstrap_samples=10)
            la = evaluate_cell(ds, Group.LIFE, Group.ART, ModelSpec(family=fam), bootstrap_samples=10)
            out[f"{fam.value} A->L"] = round(al.mean_accuracy, 4)
            out[f"{fam.value} L->A"] = round(la.mean_accuracy, 4)
    return out


if __name__ == "__main__":
    with open(sys.argv[1]) as fh:
        spec_dict = json.load(fh)
    seeds = [int(s, 0) for s in sys.argv[2:]] or [0x5EED_2024_0311_0001]
    for seed in seeds:
        print(measure(spec_dict, seed))
