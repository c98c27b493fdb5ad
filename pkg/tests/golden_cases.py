"""CLI invocations whose outputs are frozen under tests/golden.

Regenerate with ``python3 tests/golden_cases.py`` after an intended change.
"""

import contextlib
import io
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURES = os.path.join(HERE, "fixtures")
GOLDEN = os.path.join(HERE, "golden")

CASES = [
    ("check_gauss", ["check", "gauss.json"], 0),
    ("check_h3", ["check", "h3.json"], 0),
    ("check_bad_rank", ["check", "bad_rank.json"], 1),
    ("mc_gauss_half", ["mc", "--gamma0", "1/2", "--no-anchor-p", "gauss.json"], 0),
    ("mc_rank_one_half", ["mc", "--gamma0", "1/2", "--anchor-p", "rank_one.json"], 0),
    ("twist_gauss", ["twist", "--at", "0=1/4", "--at", "1=1/2", "gauss.json"], 0),
    ("reduce_gauss", ["reduce", "gauss.json"], 0),
    ("reduce_h3", ["reduce", "h3.json"], 0),
    ("hypergeom_gauss", ["hypergeom", "--alpha", "1/3,2/3", "--beta", "1/12,11/12"], 0),
    ("verify_gauss", ["verify", "gauss.json"], 0),
    ("verify_h3", ["verify", "--seed", "5", "h3.json"], 0),
    ("verify_h3_small_field", ["verify", "--max-order", "6", "h3.json"], 3),
]


def run(argv):
    """Run the CLI in-process from the fixtures directory."""
    from hodgemc.cli import main

    out, err = io.StringIO(), io.StringIO()
    cwd = os.getcwd()
    os.chdir(FIXTURES)
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = main(argv)
    finally:
        os.chdir(cwd)
    return code, out.getvalue(), err.getvalue()


def golden_text(code, out, err):
    return f"exit: {code}\n--- stdout\n{out}--- stderr\n{err}"


if __name__ == "__main__":
    os.makedirs(GOLDEN, exist_ok=True)
    for name, argv, _ in CASES:
        text = golden_text(*run(argv))
        with open(os.path.join(GOLDEN, name + ".txt"), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print(name, text.splitlines()[0], file=sys.stderr)
