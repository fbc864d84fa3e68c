#!/usr/bin/env python3
# Copyright 2026 The qdemon Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Reference ledgers for the shipped presets, computed with numpy.

Closed-form bookkeeping only: no feedback steps are simulated, the work
columns come straight from the entropy/energy identities, and the clamp flag
from the branch spectra. Usage:

    scripts/ledger_oracle.py presets/*.json --out presets/expected
"""
import argparse
import json
import math
import pathlib

import numpy as np

COLUMNS = ["scenario_id", "mode", "dim", "T", "E", "S", "F", "n_outcomes",
           "delta_E_meas", "delta_S_meas", "shannon_outcomes", "work_total",
           "work_fb", "delta_F", "delta_S_tot", "closure_distance",
           "efficiency_flag", "clamp_flag"]


def matrix(rows):
    return np.array([[complex(z[0], z[1]) if isinstance(z, list) else complex(z)
                      for z in r] for r in rows])


def hamiltonian(spec):
    if "diagonal" in spec:
        return np.diag(np.array(spec["diagonal"], dtype=complex))
    return matrix(spec["matrix"])


def kraus_groups(m):
    kind = m["kind"]
    if kind in ("bare", "efficient"):
        return [[matrix(a)] for a in m["operators"]]
    if kind == "inefficient":
        return [[matrix(a) for a in g] for g in m["groups"]]
    if kind == "weak":
        b = matrix(m["generator"])
        eps = m["epsilon"]
        w, v = np.linalg.eigh(b)
        return [[v @ np.diag(np.sqrt((1 + s * eps * w) / 2)) @ v.conj().T] for s in (1, -1)]
    raise SystemExit(f"oracle does not handle measurement kind {kind}")


def entropy_of(rho):
    lam = np.clip(np.linalg.eigvalsh(rho), 0.0, None)
    lam = lam[lam > 0]
    return float(-(lam * np.log(lam)).sum())


def thermal(h, kt):
    w, v = np.linalg.eigh(h)
    weights = np.exp(-(w - w.min()) / kt)
    rho = v @ np.diag(weights / weights.sum()) @ v.conj().T
    log_z = math.log(weights.sum()) - w.min() / kt
    return rho, -kt * log_z


def row(cfg):
    t = cfg["bath"]["temperature"]
    kt = cfg.get("constants", {}).get("k", 1.0) * t
    lam_floor = cfg.get("numerics", {}).get("lambda_floor", 1e-12)
    h = hamiltonian(cfg["system"]["hamiltonian"])
    rho, f_closed = thermal(h, kt)
    e = float(np.trace(h @ rho).real)
    s = entropy_of(rho)
    f = e - kt * s
    assert abs(f - f_closed) < 1e-12

    mode = cfg.get("run", {}).get("mode", "cycle")
    delta_f = 0.0
    if mode == "transform":
        _, f2 = thermal(hamiltonian(cfg["transform"]["h2"]), kt)
        delta_f = f - f2

    groups = kraus_groups(cfg["measurement"])
    ps, s_n, e_n = [], [], []
    clamp = False
    for g in groups:
        num = sum(a @ rho @ a.conj().T for a in g)
        p = float(np.trace(num).real)
        if p < 1e-14:
            continue
        state = num / p
        ps.append(p)
        s_n.append(entropy_of(state))
        e_n.append(float(np.trace(h @ state).real))
        clamp = clamp or bool(np.linalg.eigvalsh(state).min() < lam_floor)
    ps = np.array(ps) / sum(ps)
    d_e = float(ps @ np.array(e_n)) - e
    d_s = s - float(ps @ np.array(s_n))
    shannon = float(-(ps[ps > 0] * np.log(ps[ps > 0])).sum()) + 0.0
    work_total = delta_f + kt * d_s + d_e
    d_s_tot = shannon - d_s
    return {
        "scenario_id": cfg.get("id", cfg.get("scenario_id", "scenario")),
        "mode": mode, "dim": cfg["system"]["dim"], "T": t, "E": e, "S": s, "F": f,
        "n_outcomes": len(groups), "delta_E_meas": d_e, "delta_S_meas": d_s,
        "shannon_outcomes": shannon, "work_total": work_total,
        "work_fb": work_total - d_e, "delta_F": delta_f, "delta_S_tot": d_s_tot,
        "closure_distance": 0.0, "efficiency_flag": d_s_tot < 1e-8, "clamp_flag": clamp,
    }


def fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("configs", nargs="+")
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for path in args.configs:
        cfg = json.loads(pathlib.Path(path).read_text())
        r = row(cfg)
        text = ",".join(COLUMNS) + "\n" + ",".join(fmt(r[c]) for c in COLUMNS) + "\n"
        (out / (pathlib.Path(path).stem + ".csv")).write_text(text)


if __name__ == "__main__":
    main()
