"""Checks that `tyfix normalize` keeps Python's own AST unchanged.

usage: check_normalize.py TYFIX_BINARY DIR...
"""

import ast
import pathlib
import subprocess
import sys


def main(argv):
    if len(argv) < 3:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    binary, roots = argv[1], argv[2:]
    files = sorted(p for root in roots for p in pathlib.Path(root).rglob("*.py"))
    failures = 0
    for path in files:
        source = path.read_text()
        out = subprocess.run([binary, "normalize", str(path)], capture_output=True, text=True)
        if out.returncode != 0:
            print(f"FAIL {path}: exit {out.returncode}: {out.stderr.strip()}")
            failures += 1
            continue
        try:
            same = ast.dump(ast.parse(source)) == ast.dump(ast.parse(out.stdout))
        except SyntaxError as e:
            print(f"FAIL {path}: normalized text does not parse: {e}")
            failures += 1
            continue
        if not same:
            print(f"FAIL {path}: AST changed")
            failures += 1
        # Normalizing twice changes nothing.
        again = subprocess.run([binary, "normalize", "/dev/stdin"], input=out.stdout, capture_output=True, text=True)
        if again.stdout != out.stdout:
            print(f"FAIL {path}: normalize is not idempotent")
            failures += 1
    print(f"{len(files) - failures}/{len(files)} files keep their AST")
    return 1 if failures or not files else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
