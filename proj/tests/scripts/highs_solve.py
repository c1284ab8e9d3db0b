"""Solve an LP file with HiGHS and print name=value lines for every column."""
import sys

import highspy


def main() -> int:
    if len(sys.argv) != 4:
        print("usage: highs_solve.py MODEL.lp VALUES.txt TIME_LIMIT", file=sys.stderr)
        return 2
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("time_limit", float(sys.argv[3]))
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_feasibility_tolerance", 1e-9)
    if h.readModel(sys.argv[1]) != highspy.HighsStatus.kOk:
        print("read failed", file=sys.stderr)
        return 1
    h.run()
    status = h.modelStatusToString(h.getModelStatus())
    if status != "Optimal":
        print("status " + status, file=sys.stderr)
        return 1
    names = h.getLp().col_names_
    values = h.getSolution().col_value
    with open(sys.argv[2], "w") as out:
        out.write("# objective %.17g\n" % h.getInfo().objective_function_value)
        for n, v in zip(names, values):
            out.write("%s=%.17g\n" % (n, v))
    return 0


if __name__ == "__main__":
    sys.exit(main())
