"""Walk through the trefoil: every pair of crossings unknots it, all three do not."""

from __future__ import annotations

from knotforge import audit_bound, genus_bracket, parse_pd, search_trivializers, verify_trivializer

TREFOIL = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"


def main() -> None:
    d = parse_pd(TREFOIL)
    print("trefoil:", len(d.crossings), "crossings, genus bracket", genus_bracket(d))

    for rep in search_trivializers(d, 1):
        print("pair", rep.candidate, "->", rep.status)
        for subset, v in rep.subset_verdicts.items():
            print("   change", subset, "->", v.status, f"({len(v.trace.steps)} moves)")

    triple = verify_trivializer(d, [0, 1, 2])
    witness = triple.subset_verdicts[triple.witness]
    print("all three ->", triple.status, "witness", triple.witness, "by", witness.invariant, witness.value)

    best = search_trivializers(d, 1)[0]
    print("audit:", audit_bound(best, genus_bracket(d)).status)


if __name__ == "__main__":
    main()
