"""Ground-truth networks (BIF subset), dataset CSV files, forward sampling.

Supported BIF subset::

    network name { ... }
    variable X { type discrete [ 2 ] { yes, no }; }
    probability ( X | A, B ) { (yes, no) 0.2, 0.8; ... }
    probability ( A ) { table 0.3, 0.7; }

``//`` and ``/* */`` comments are stripped; ``property`` lines are ignored.

Sampling uses numpy's PCG64 bit generator (``numpy.random.default_rng``),
whose output stream is fixed across platforms for a given seed.
"""

from __future__ import annotations

import csv
import io
import itertools
import re
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, RaggedRow, RowNotNormalized, UndeclaredVariable, UnknownLabel, UnknownSymbol
from .model import BayesNet, Dag, DiscreteDataset, VariableTable

_TOKEN = re.compile(r"\s*(?:([{}()\[\];,|])|([^\s{}()\[\];,|]+))")


@dataclass
class _Tok:
    text: str
    line: int


def _strip_comments(text: str) -> str:
    # keep newlines inside block comments so line numbers stay right
    text = re.sub(r"/\*.*?\*/", lambda m: "\n" * m.group(0).count("\n"), text, flags=re.S)
    return re.sub(r"//[^\n]*", "", text)


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    for lineno, line in enumerate(_strip_comments(text).splitlines(), start=1):
        pos = 0
        while pos < len(line):
            m = _TOKEN.match(line, pos)
            if m is None or m.end() == pos:
                if line[pos:].strip():
                    raise ParseError(lineno, f"unexpected text {line[pos:]!r}")
                break
            toks.append(_Tok(m.group(1) or m.group(2), lineno))
            pos = m.end()
    return toks


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            last = self.toks[-1].line if self.toks else 1
            raise ParseError(last, "unexpected end of input")
        self.i += 1
        return tok

    def expect(self, text):
        tok = self.next()
        if tok.text != text:
            raise ParseError(tok.line, f"expected {text!r}, got {tok.text!r}")
        return tok

    def skip_block(self):
        # consumes a balanced { ... } block
        self.expect("{")
        depth = 1
        while depth:
            t = self.next().text
            depth += (t == "{") - (t == "}")

    def skip_statement(self):
        while self.next().text != ";":
            pass

    def name_list(self, terminator):
        names = []
        while True:
            tok = self.next()
            if tok.text == terminator:
                return names
            if tok.text == ",":
                continue
            names.append(tok.text)

    def numbers(self):
        vals = []
        while True:
            tok = self.next()
            if tok.text == ";":
                return vals
            if tok.text == ",":
                continue
            try:
                vals.append(float(tok.text))
            except ValueError:
                raise ParseError(tok.line, f"expected a probability, got {tok.text!r}") from None


def parse_bif(text: str) -> BayesNet:
    p = _Parser(_tokenize(text))
    name = "network"
    variables: dict[str, tuple[list[str], int]] = {}
    blocks: dict[str, tuple[list[str], list, int]] = {}

    while p.peek() is not None:
        tok = p.next()
        if tok.text == "network":
            name = p.next().text
            p.skip_block()
        elif tok.text == "variable":
            vname = p.next().text
            if vname in variables:
                raise ParseError(tok.line, f"variable {vname} declared twice")
            p.expect("{")
            labels = None
            while p.peek() is not None and p.peek().text != "}":
                kw = p.next()
                if kw.text == "type":
                    p.expect("discrete")
                    p.expect("[")
                    k = p.next()
                    p.expect("]")
                    p.expect("{")
                    labels = p.name_list("}")
                    p.expect(";")
                    if not k.text.isdigit() or int(k.text) != len(labels):
                        raise ParseError(k.line, f"{vname}: declared {k.text} values but listed {len(labels)}")
                else:
                    p.skip_statement()
            p.expect("}")
            if labels is None:
                raise ParseError(tok.line, f"variable {vname} has no type declaration")
            variables[vname] = (labels, tok.line)
        elif tok.text == "probability":
            p.expect("(")
            names = []
            parents: list[str] = []
            cur = names
            while True:
                t = p.next()
                if t.text == ")":
                    break
                if t.text == "|":
                    cur = parents
                elif t.text != ",":
                    cur.append(t.text)
            if len(names) != 1:
                raise ParseError(tok.line, "probability block must name exactly one child")
            child = names[0]
            if child in blocks:
                raise ParseError(tok.line, f"second probability block for {child}")
            p.expect("{")
            entries = []
            while p.peek() is not None and p.peek().text != "}":
                t = p.next()
                if t.text == "table":
                    entries.append((None, p.numbers(), t.line))
                elif t.text == "(":
                    cfg = p.name_list(")")
                    entries.append((cfg, p.numbers(), t.line))
                elif t.text in ("default", "property"):
                    p.skip_statement()
                else:
                    raise ParseError(t.line, f"unexpected token {t.text!r} in probability block")
            p.expect("}")
            blocks[child] = (parents, entries, tok.line)
        else:
            raise ParseError(tok.line, f"unexpected token {tok.text!r}")

    for child, (parents, _, line) in blocks.items():
        for v in [child] + parents:
            if v not in variables:
                raise UndeclaredVariable(f"line {line}: {v} is not declared")
    for vname, (_, line) in variables.items():
        if vname not in blocks:
            raise ParseError(line, f"variable {vname} has no probability block")

    table = VariableTable.build((v, labels) for v, (labels, _) in variables.items())
    n = len(table)
    idx = {v.symbol: v.index for v in table}
    card = table.cardinalities
    parent_sets = []
    cpts = []
    for v in table:
        parents, entries, line = blocks[v.symbol]
        pidx = [idx[x] for x in parents]
        if len(set(pidx)) != len(pidx):
            raise ParseError(line, f"{v.symbol}: repeated parent")
        order = sorted(range(len(pidx)), key=lambda k: pidx[k])
        sorted_pidx = [pidx[k] for k in order]
        q = int(np.prod(card[sorted_pidx])) if pidx else 1
        cpt = np.full((q, v.cardinality), np.nan)
        for cfg, probs, eline in entries:
            if len(probs) != v.cardinality and cfg is not None:
                raise ParseError(eline, f"{v.symbol}: expected {v.cardinality} probabilities, got {len(probs)}")
            if cfg is None:
                if pidx:
                    raise ParseError(eline, f"{v.symbol}: 'table' is only supported for root nodes")
                if len(probs) != v.cardinality:
                    raise ParseError(eline, f"{v.symbol}: expected {v.cardinality} probabilities, got {len(probs)}")
                row = 0
            else:
                if len(cfg) != len(pidx):
                    raise ParseError(eline, f"{v.symbol}: configuration {cfg} does not match parents {parents}")
                codes = []
                for lab, pi in zip(cfg, pidx):
                    labels = table[pi].labels
                    if lab not in labels:
                        raise ParseError(eline, f"{v.symbol}: unknown value {lab!r} of parent {table[pi].symbol}")
                    codes.append(labels.index(lab))
                row = 0
                for k in order:
                    row = row * card[pidx[k]] + codes[k]
            arr = np.asarray(probs, dtype=float)
            total = arr.sum()
            if abs(total - 1.0) > 1e-6 or np.any(arr < 0):
                raise RowNotNormalized(f"line {eline}: row of {v.symbol} sums to {total!r}")
            cpt[row] = arr / total
        if np.isnan(cpt).any():
            raise ParseError(line, f"{v.symbol}: missing parent configurations")
        parent_sets.append(tuple(sorted_pidx))
        cpts.append(cpt)
    return BayesNet(table, Dag(n, tuple(parent_sets)), tuple(cpts), name=name)


def write_bif(bn: BayesNet) -> str:
    out = [f"network {bn.name} {{\n}}"]
    for v in bn.variables:
        out.append(
            f"variable {v.symbol} {{\n  type discrete [ {v.cardinality} ] {{ {', '.join(v.labels)} }};\n}}"
        )
    for v in bn.variables:
        parents = bn.dag.parents[v.index]
        cpt = bn.cpts[v.index]
        if not parents:
            out.append(f"probability ( {v.symbol} ) {{\n  table {', '.join(repr(float(x)) for x in cpt[0])};\n}}")
            continue
        head = f"probability ( {v.symbol} | {', '.join(bn.variables[p].symbol for p in parents)} ) {{"
        lines = [head]
        label_lists = [bn.variables[p].labels for p in parents]
        for row, cfg in enumerate(itertools.product(*label_lists)):
            lines.append(f"  ({', '.join(cfg)}) {', '.join(repr(float(x)) for x in cpt[row])};")
        lines.append("}")
        out.append("\n".join(lines))
    return "\n".join(out) + "\n"


def parent_config_index(rows: np.ndarray, parents, card: np.ndarray) -> np.ndarray:
    """Mixed-radix configuration index of ``parents`` per row, first parent most significant."""
    idx = np.zeros(rows.shape[0], dtype=np.int64)
    for p in parents:
        idx = idx * card[p] + rows[:, p]
    return idx


def forward_sample(bn: BayesNet, N: int, seed: int) -> DiscreteDataset:
    if N < 1:
        raise ValueError("N must be >= 1")
    rng = np.random.default_rng(seed)
    card = bn.variables.cardinalities
    rows = np.zeros((N, bn.dag.n), dtype=np.int64)
    for v in bn.dag.topological_order():
        cum = np.cumsum(bn.cpts[v], axis=1)
        cfg = parent_config_index(rows, bn.dag.parents[v], card)
        u = rng.random(N)
        codes = (u[:, None] >= cum[cfg]).sum(axis=1)
        rows[:, v] = np.minimum(codes, card[v] - 1)
    return DiscreteDataset(bn.variables, rows)


def load_dataset(text: str, variables: VariableTable) -> DiscreteDataset:
    reader = csv.reader(io.StringIO(text))
    lines = [r for r in reader if r and any(c.strip() for c in r)]
    if not lines:
        raise UnknownSymbol("dataset has no header row")
    header = [h.strip() for h in lines[0]]
    cols = []
    for h in header:
        i = variables.lookup(h)
        if i is None:
            raise UnknownSymbol(f"column {h!r} is not a declared variable")
        cols.append(i)
    missing = set(range(len(variables))) - set(cols)
    if missing or len(set(cols)) != len(cols):
        names = ", ".join(variables[i].symbol for i in sorted(missing)) or "duplicate column"
        raise UnknownSymbol(f"dataset header does not match variables: {names}")
    rows = np.zeros((len(lines) - 1, len(variables)), dtype=np.int64)
    for r, line in enumerate(lines[1:]):
        if len(line) != len(cols):
            raise RaggedRow(f"data row {r + 1} has {len(line)} cells, expected {len(cols)}")
        for cell, i in zip(line, cols):
            cell = cell.strip()
            var = variables[i]
            if cell in var.labels:
                rows[r, i] = var.labels.index(cell)
            elif cell.isdigit() and int(cell) < var.cardinality:
                rows[r, i] = int(cell)
            else:
                raise UnknownLabel(f"data row {r + 1}: {cell!r} is not a value of {var.symbol}")
    return DiscreteDataset(variables, rows)


def write_dataset(data: DiscreteDataset) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(data.variables.symbols)
    labels = [v.labels for v in data.variables]
    for row in data.rows:
        w.writerow([labels[i][c] for i, c in enumerate(row)])
    return buf.getvalue()


def write_graph(dag: Dag, variables: VariableTable) -> str:
    syms = variables.symbols
    lines = ["variables: " + ", ".join(syms)]
    lines += [f"{syms[u]} -> {syms[v]}" for u, v in dag.edges()]
    return "\n".join(lines) + "\n"


def read_graph(text: str, variables: VariableTable | None = None) -> tuple[list[str], Dag]:
    """Parse a learned-graph file; returns its symbol header and the Dag."""
    symbols = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("variables:"):
            symbols = [s.strip() for s in line[len("variables:"):].split(",") if s.strip()]
            continue
        if symbols is None:
            raise ParseError(lineno, "edge before 'variables:' header")
        if "->" not in line:
            raise ParseError(lineno, f"expected 'SRC -> DST', got {line!r}")
        a, b = (s.strip() for s in line.split("->", 1))
        for s in (a, b):
            if s not in symbols:
                raise UnknownSymbol(f"line {lineno}: {s}")
        edges.append((symbols.index(a), symbols.index(b)))
    if symbols is None:
        raise ParseError(1, "missing 'variables:' header")
    if variables is not None and symbols != variables.symbols:
        raise UnknownSymbol(f"graph header {symbols} does not match variables {variables.symbols}")
    return symbols, Dag.from_edges(len(symbols), edges)
