"""The RO(C2)-graded homology of a point with F2 and Z coefficients."""
from equihom.coefficients import point_homology
from equihom.grading import DegreeC2

for coeff in ("f2", "z"):
    print(f"coefficients {coeff}: value at C2/C2 in degree a + b*sigma")
    print("      " + "".join(f"{a:>7}" for a in range(-4, 5)))
    for b in range(4, -5, -1):
        row = []
        for a in range(-4, 5):
            row.append(point_homology(coeff, DegreeC2(a, b)).describe(2))
        print(f"b={b:>3} " + "".join(f"{x:>7}" for x in row))
    print()
