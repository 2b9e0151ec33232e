"""Score five heterogeneous fog devices for one 1000 MI task.

Walks the reference worked example: each device's completion time is its
raw execution time de-rated by free resources, CPU-availability
fluctuation and distance throughput; the availability score relates
battery life to that completion time. The policy picks the smallest
completion time for fresh work.
"""

from fogsim.fixtures import fd_table_nodes, fd_table_task
from fogsim.policies import mc_allocate
from fogsim.scoring import score_device

task = fd_table_task()
print(f"task: {task.length:.0f} MI, {task.data_size:.0f} bits, deadline {task.deadline:.0f}s\n")

header = f"{'device':8} {'E_t':>7} {'free':>6} {'fluct':>6} {'t_bd':>6} {'C_t':>8} {'A_s':>8}"
print(header)
print("-" * len(header))
for node in fd_table_nodes():
    card = score_device(task, node)
    print(f"{node.id:8} {card.execution_time:7.2f} {node.free_resource_fraction:6.2f} "
          f"{node.caf_score:6.2f} {card.throughput_by_distance:6.2f} "
          f"{card.completion_time:8.2f} {card.availability_score:8.3f}")

ranked = mc_allocate(task, fd_table_nodes())
print(f"\nallocation order (ascending completion time): {[n.id for n in ranked]}")
print(f"chosen resource: {ranked[0].id}")
