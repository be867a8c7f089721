import datetime

import numpy as np
import matplotlib.pyplot as plt
from gyrotop.diagnostics import gyroscope_for
from gyrotop.models import example_spec, generic_point, hamiltonian_field, vector_field
from gyrotop.poisson import hamiltonian_vector_field

REPEATS = 20


def points(spec, count):
    rng = np.random.default_rng(0)
    return [generic_point(spec, rng) for _ in range(count)]


x = np.arange(3, 13, dtype=int)
y = []
z = []

for n in x:
    spec = example_spec("lagrange_so_so", int(n))
    sample = points(spec, REPEATS)
    start = datetime.datetime.now()
    for point in sample:
        vector_field(spec, point)
    finish = datetime.datetime.now()
    y.append((finish - start).total_seconds() / REPEATS)

    H = hamiltonian_field(spec)
    begin = datetime.datetime.now()
    for point in sample:
        hamiltonian_vector_field(gyroscope_for(spec, point), H, point)
    end = datetime.datetime.now()
    z.append((end - begin).total_seconds() / REPEATS)

plt.plot(x, y, label='Closed-form vector field')
plt.plot(x, z, label='Vector field from bracket gradients')
plt.xlabel('Dimension n')
plt.ylabel('Time per evaluation (s)')
plt.title('Performance on so(n) x so(n)')
plt.legend()
plt.yscale("log")
plt.savefig("./benchmark/performance.png")
