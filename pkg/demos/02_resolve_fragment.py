"""
Resolving a textual ellipsis
============================

Three utterances about a notebook.  The third mentions "die Ladezeit" (the
charge time) without saying of what; the resolver links it to the
accumulator introduced earlier.
"""
from bridging import ResolutionSession, data_path, load_demo_kb, load_discourse

kb = load_demo_kb()
with open(data_path("fragment.dis"), encoding="utf-8") as fh:
    utterances = load_discourse(fh, kb)

session = ResolutionSession(kb)
for u in utterances:
    report = session.process(u)
    st = report.state
    print(f"U{report.index}: C_f = {[e.label for e in st.cf]}  C_b = {st.cb.label if st.cb else None}"
          f"  ({report.transition})")
    for m, v in report.verdicts:
        print(f"    {m.surface:28} {v.outcome}")
    for res in report.results:
        print("   ", res.summary())
        for y, cp in res.candidates:
            print(f"      {y.label:12} {cp}")
        if res.skipped:
            print("      never examined:", [e.label for e in res.skipped])

###############################################################################
# The text knowledge base now holds the coherence-establishing fact.

for fact in sorted(kb.text.asserted):
    print(" ", *fact)

###############################################################################
# With the genitive spelled out ("die Ladezeit des Akkus") the interpreter
# already asserted the link, so nothing is searched.

kb2 = load_demo_kb()
with open(data_path("fragment_genitive.dis"), encoding="utf-8") as fh:
    last = ResolutionSession(kb2).run(load_discourse(fh, kb2))[-1]
for m, v in last.verdicts:
    print(f"  {m.surface:10} {v.outcome}  {v.detail}")
