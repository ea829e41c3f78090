#!/usr/bin/env python3
"""Order fulfillment as a compensating transaction.

Builds the warehouse scenario step by step and inspects what the
transaction block guarantees: a failed credit check aborts the order and
every action that already happened is undone, newest first.
"""
from ccsp import check_standard, parse_standard, traces_standard
from ccsp.terms import Terminal
from ccsp.warehouse import COMPENSATIONS, WAREHOUSE_TEXT, warehouse_report


def explain_scenario():
    print("=" * 64)
    print("THE TRANSACTION")
    print("=" * 64)
    print(WAREHOUSE_TEXT)
    print()
    print("Accepting the order deducts stock (compensation: restock).")
    print("Courier booking, packing, and the credit check run in parallel;")
    print("a failed credit check throws inside the transaction block.")


def smaller_appetizer():
    print()
    print("=" * 64)
    print("APPETIZER: ONE PACK STEP, ALWAYS FAILING")
    print("=" * 64)
    text = "[ Pack % Unpack ; THROWW ]"
    term = parse_standard(text)
    print(f"{text}")
    for t in sorted(traces_standard(term)):
        print(f"  {t}")
    print("Pack happens, the throw aborts, Unpack replays, the block")
    print("terminates successfully: the interrupt never escapes.")
    print(f"semantics agree: {check_standard(term).status}")


def full_scenario():
    print()
    print("=" * 64)
    print("FULL SCENARIO")
    print("=" * 64)
    report = warehouse_report()
    success = [t for t in report.traces if "Ok" in t.events]
    failed = [t for t in report.traces if "NotOk" in t.events]
    print(f"{len(report.traces)} runs: {len(success)} clean, {len(failed)} compensated")
    assert all(t.terminal is Terminal.TICK for t in report.traces)

    print("\nA clean run (no undo actions):")
    print(f"  {success[0]}")

    print("\nA compensated run:")
    example = failed[0]
    print(f"  {example}")
    undo_positions = {
        undo: example.events.index(undo)
        for undo in COMPENSATIONS.values()
        if undo in example.events
    }
    ordered = sorted(undo_positions, key=undo_positions.get)
    print(f"  undo order: {' -> '.join(ordered)}")
    print("  restocking always comes last: the first forward step is")
    print("  compensated last.")

    print("\nGuarantee report:")
    for name, passed, detail in report.checks:
        print(f"  {'pass' if passed else 'FAIL'}: {name} ({detail})")


def main():
    explain_scenario()
    smaller_appetizer()
    full_scenario()


if __name__ == "__main__":
    main()
