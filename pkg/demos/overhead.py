"""
Overhead and start-up cost
==========================

Each packet carries n data symbols plus a padding symbol and a parity
symbol, so the overhead is 2/n.  The one-off cost is shipping the public
generators.
"""
from securenc.cli import main

for n in (50, 100, 410, 1000):
    print(f"n = {n:4d}: overhead {100 * 2 / n:.4f}%")

print()
main(["report-overhead", "--n", "410"])
