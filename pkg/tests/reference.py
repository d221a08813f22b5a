"""Published reference values shared by the test modules."""

# bound spectrum of the A = 3.5 well, M = 2 (GeV), index = node count
TABLE_II = (
    -1.998, -1.979, -1.939, -1.874, -1.786, -1.681, -1.561, -1.428, -1.282,
    -1.126, -0.961, -0.789, -0.611, -0.428, -0.241, -0.051, 0.141, 0.334,
    0.528, 0.721, 0.913, 1.102, 1.288, 1.469, 1.643, 1.805, 1.943,
)

T_AT_34_75 = 1.38644178616e-4
