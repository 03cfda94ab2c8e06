"""Print the antipodal-face classification for the built-in instances.

Usage: python3 scripts/case_table.py
"""
from covlab.facerecovery import classify_antipodal
from covlab.verify import CASE_INSTANCES


def main() -> None:
    print(f"{'instance':<18} {'w':<12} {'case':>4} {'exp':>4} {'dim':>4} {'slope':>8}")
    for name, P, w, expected in CASE_INSTANCES:
        r = classify_antipodal(P, w)
        mark = "" if r.case_id == expected else f"  (expected {expected})"
        print(f"{name:<18} {str(tuple(w)):<12} {r.case_id:>4} {r.leading_exponent:>4} "
              f"{r.dim_DPw:>4} {r.slopes[-1]:>8.4f}{mark}")


if __name__ == "__main__":
    main()
