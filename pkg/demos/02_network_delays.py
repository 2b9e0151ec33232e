"""Bandwidth fairness and delay decomposition on a two-hop path."""

from fogsim.model import NetworkLink, NetworkPath
from fogsim.network import (
    available_bandwidth,
    available_path_bandwidth,
    link_delay,
    packetized_delay,
    path_bandwidth,
    path_delay,
    processing_delay,
)

wifi = NetworkLink(
    endpoint_bandwidths=(11e6, 11e6),
    capacity=11e6,
    sharing_users=4,
    medium_throughput=0.55,  # CSMA/CA ceiling
    transmission_delay=12000 / 11e6,
    propagation_delay=30e-6,
    processing_delay=processing_delay(12000, 11e6),
    const_overhead=0.001,
)
backhaul = NetworkLink(
    endpoint_bandwidths=(100e6, 100e6),
    capacity=100e6,
    sharing_users=20,
    medium_throughput=0.83,
    transmission_delay=12000 / 100e6,
    propagation_delay=0.0004,  # 80 km of fibre
    processing_delay=processing_delay(12000, 100e6),
    const_overhead=0.0002,
)
path = NetworkPath(links=[wifi, backhaul])

print(f"wifi fair share      : {available_bandwidth(wifi)/1e6:8.3f} Mbit/s")
print(f"backhaul fair share  : {available_bandwidth(backhaul)/1e6:8.3f} Mbit/s")
print(f"path raw bottleneck  : {path_bandwidth(path)/1e6:8.3f} Mbit/s")
print(f"path usable          : {available_path_bandwidth(path)/1e6:8.3f} Mbit/s")
print()
print(f"wifi round trip      : {link_delay(wifi)*1e3:8.3f} ms")
print(f"path one-way latency : {path_delay(path)*1e3:8.3f} ms")
for size in (1500 * 8, 1_000_000 * 8, 5_000_000 * 8):
    d = packetized_delay(size, path)
    print(f"packetised {size/8:7.0f} B : {d*1e3:8.3f} ms")
