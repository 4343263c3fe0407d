#!/usr/bin/env python3
"""MILP backend hook: solves an exported .lp model with SciPy's HiGHS.

Usage: external_solver.py <model.lp> <solution.out> [rel_gap]

Reads the canonical LP subset written by the exporter (one row per line,
explicit bounds for every variable, optional Binaries section) and writes a
key=value solution file:

    status=optimal|infeasible|unbounded|gap-limit
    objective=<float>
    gap=<float>
    nodes=<int>
    var.<name>=<float>
"""

import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import csr_matrix

INF = float("inf")


def tokenize_terms(tokens):
    """Yields (coefficient, name) pairs plus a bare-constant total."""
    terms = []
    constant = 0.0
    sign = 1.0
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok == "+":
            sign = 1.0
        elif tok == "-":
            sign = -1.0
        else:
            try:
                coef = float(tok)
            except ValueError:
                terms.append((sign, tok))
                sign = 1.0
                i += 1
                continue
            if i + 1 < len(tokens) and tokens[i + 1] not in ("+", "-"):
                terms.append((sign * coef, tokens[i + 1]))
                i += 1
            else:
                constant += sign * coef
            sign = 1.0
        i += 1
    return terms, constant


def parse_lp(path):
    obj = []
    obj_offset = 0.0
    rows = []  # (terms, lo, hi)
    bounds = {}
    binaries = set()
    order = []
    seen = set()

    def intern(name):
        if name not in seen:
            seen.add(name)
            order.append(name)

    section = None
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("\\"):
                continue
            if line in ("Minimize", "Subject To", "Bounds", "Binaries", "End"):
                section = line
                if line == "End":
                    break
                continue
            if section == "Minimize":
                body = line.split(":", 1)[1]
                terms, const = tokenize_terms(body.split())
                obj.extend(terms)
                obj_offset += const
            elif section == "Subject To":
                _, body = line.split(":", 1)
                tokens = body.split()
                for k, tok in enumerate(tokens):
                    if tok in ("<=", ">=", "="):
                        sense, rhs = tok, float(tokens[k + 1])
                        terms, const = tokenize_terms(tokens[:k])
                        rhs -= const
                        lo = -INF if sense == "<=" else rhs
                        hi = INF if sense == ">=" else rhs
                        rows.append((terms, lo, hi))
                        break
                else:
                    raise ValueError(f"row without sense: {line}")
            elif section == "Bounds":
                toks = line.split()
                if len(toks) == 2 and toks[1] == "free":
                    bounds[toks[0]] = (-INF, INF)
                    intern(toks[0])
                elif len(toks) == 5 and toks[1] == "<=" and toks[3] == "<=":
                    lo = -INF if toks[0] == "-inf" else float(toks[0])
                    hi = INF if toks[4] == "+inf" else float(toks[4])
                    bounds[toks[2]] = (lo, hi)
                    intern(toks[2])
                else:
                    raise ValueError(f"bad bounds line: {line}")
            elif section == "Binaries":
                for tok in line.split():
                    binaries.add(tok)
                    intern(tok)

    for _, name in obj:
        intern(name)
    for terms, _, _ in rows:
        for _, name in terms:
            intern(name)

    index = {n: i for i, n in enumerate(order)}
    n = len(order)
    c = np.zeros(n)
    for coef, name in obj:
        c[index[name]] += coef
    lo = np.zeros(n)
    hi = np.full(n, INF)
    integrality = np.zeros(n)
    for i, name in enumerate(order):
        if name in bounds:
            lo[i], hi[i] = bounds[name]
        elif name in binaries:
            lo[i], hi[i] = 0.0, 1.0
        if name in binaries:
            integrality[i] = 1
    data, indices, indptr, cl, cu = [], [], [0], [], []
    for terms, rlo, rhi in rows:
        acc = {}
        for coef, name in terms:
            acc[index[name]] = acc.get(index[name], 0.0) + coef
        for j, v in acc.items():
            indices.append(j)
            data.append(v)
        indptr.append(len(indices))
        cl.append(rlo)
        cu.append(rhi)
    A = csr_matrix((data, indices, indptr), shape=(len(rows), n))
    return order, c, obj_offset, A, np.array(cl), np.array(cu), lo, hi, integrality


def main():
    if len(sys.argv) < 3:
        sys.exit("usage: external_solver.py <model.lp> <solution.out> [rel_gap]")
    model_path, sol_path = sys.argv[1], sys.argv[2]
    rel_gap = float(sys.argv[3]) if len(sys.argv) > 3 else 1e-4

    order, c, offset, A, cl, cu, lo, hi, integrality = parse_lp(model_path)

    kwargs = {}
    if A.shape[0] > 0:
        kwargs["constraints"] = LinearConstraint(A, cl, cu)
    res = milp(
        c,
        integrality=integrality,
        bounds=Bounds(lo, hi),
        options={"mip_rel_gap": rel_gap, "presolve": True, "disp": False},
        **kwargs,
    )

    with open(sol_path, "w") as out:
        if res.status == 0:
            status = "optimal"
        elif res.status == 1:
            status = "gap-limit" if res.x is not None else "infeasible"
        elif res.status == 2:
            status = "infeasible"
        elif res.status == 3:
            status = "unbounded"
        else:
            status = "infeasible"
        out.write(f"status={status}\n")
        if res.x is not None:
            out.write(f"objective={res.fun + offset:.17g}\n")
            gap = getattr(res, "mip_gap", None)
            if gap is not None:
                out.write(f"gap={gap:.17g}\n")
            nodes = getattr(res, "mip_node_count", None)
            if nodes is not None:
                out.write(f"nodes={int(nodes)}\n")
            for name, val in zip(order, res.x):
                out.write(f"var.{name}={val:.17g}\n")


if __name__ == "__main__":
    main()
