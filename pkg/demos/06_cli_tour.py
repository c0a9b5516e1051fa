"""Drive every CLI subcommand in process and list what each one writes.

Run from the repository root:

    python demos/06_cli_tour.py

Each subcommand lands its CSV (and SVG chart, with --svg) under
demo_out/cli/<name>/. The same commands are available on the shell as
`symplevy <name> ...` after installing the package.
"""

import os

from symplevy import cli


TOURS = [
    ["sample-path", "--horizon", "50", "--svg"],
    ["orbit", "--T", "50", "--svg"],
    ["hamiltonian", "--T", "50", "--svg"],
    ["converge", "--samples", "20", "--dts", "0.08,0.04,0.02", "--svg"],
    ["symplectic-check", "--samples", "200", "--svg"],
]


def main():
    for args in TOURS:
        name = args[0]
        out_dir = os.path.join("demo_out", "cli", name)
        print(f"$ symplevy {' '.join(args)} --out-dir {out_dir}")
        code = cli.main(args + ["--out-dir", out_dir])
        print(f"  exit code {code}")
        for entry in sorted(os.listdir(out_dir)):
            size = os.path.getsize(os.path.join(out_dir, entry))
            print(f"  {entry} ({size} bytes)")
        print()


if __name__ == "__main__":
    main()
