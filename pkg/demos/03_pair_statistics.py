"""
Filter-chain statistics over random concept pairs
=================================================

Sample unordered concept pairs and watch the path counts shrink stage by
stage.  The demo KB is tiny, so only the shape of the reduction matters.
"""
import sys

from bridging import load_demo_kb, run_eval

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
report = run_eval(load_demo_kb().schema, 20, seed)
print(report.format())
print("non-increasing:", report.is_monotone())
