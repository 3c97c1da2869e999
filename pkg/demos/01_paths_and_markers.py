"""
Conceptual paths in the demo knowledge base
===========================================

Walk from a concept to another along roles, drop cyclic chains, thin out
with the inclusion test and keep the strongest marker class.
"""
from bridging import PatternSets, build_cp_list, evaluate_paths, is_cyclic, load_demo_kb

kb = load_demo_kb()
schema = kb.schema
patterns = PatternSets.for_schema(schema)
print(schema)

###############################################################################
# A chain that leaves a whole through one part relation and re-enters a whole
# through another is cyclic: accumulator-of climbs to the computer,
# has-printer climbs back down.

print("(accumulator-of has-printer) cyclic:", is_cyclic(("accumulator-of", "has-printer"), schema))

###############################################################################
# From CHARGE-TIME to NOTEBOOK every stage of the filter chain, with counts.

report = evaluate_paths("CHARGE-TIME", "NOTEBOOK", schema, patterns)
print("connected / well-formed / after inclusion / kept:", report.counts())
for p in report.after_inclusion:
    print(f"  {str(p):45} {report.markers[p]}")
print(report.cp)

###############################################################################
# The accumulator itself is one step away, and that unit path wins outright.

print(build_cp_list("CHARGE-TIME", "ACCUMULATOR", schema, patterns))

###############################################################################
# Inclusion at work: reaching the price through the accumulator is discarded
# because the direct price-dm-pair role does the same job.

report = evaluate_paths("NOTEBOOK", "PRICE", schema, patterns)
print(len(report.included_by), "paths discarded, for example:")
for p, by in list(report.included_by.items())[:3]:
    print(f"  {p} includes {by[0]}")
print(report.cp)
