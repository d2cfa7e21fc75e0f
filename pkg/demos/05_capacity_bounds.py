"""
Capacity bounds for the mixture channel
=======================================

Upper bound from the twirled channel's Choi state plus the continuity
penalty, lower bounds from coherent and reverse coherent information.
"""

from channel_bounds.bounds import CSV_COLUMNS, bound_report

print("".join(f"{c:>20}" for c in CSV_COLUMNS))
for i in range(11):
    r = bound_report(i / 10)
    print("".join(f"{x:>20.6f}" for x in r.csv_row()))
