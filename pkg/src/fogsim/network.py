"""Bandwidth, fairness and latency arithmetic for links and paths.

All functions are pure. Rates are bits/second, sizes are bits, delays are
seconds. The packetised delay treats queuing as zero by default (service
time assumed zero); pass ``include_queuing=True`` to re-enable it.
"""

from __future__ import annotations

import math

from .model import NetworkLink, NetworkPath

# Propagation speed defaults: microseconds per km of medium.
WIRED_US_PER_KM = 5.0
MICROWAVE_US_PER_KM = 3.0


class InvalidLinkError(ValueError):
    pass


class EmptyPathError(ValueError):
    pass


def link_bandwidth(link: NetworkLink) -> float:
    """Raw bandwidth of a link: the slower of its two endpoints."""
    a, b = link.endpoint_bandwidths
    if a <= 0 or b <= 0:
        raise InvalidLinkError(f"endpoint bandwidths must be > 0, got {link.endpoint_bandwidths}")
    return min(a, b)


def path_bandwidth(path: NetworkPath) -> float:
    """Bottleneck bandwidth over every link of the path."""
    if not path.links:
        raise EmptyPathError("path has no links")
    return min(link_bandwidth(link) for link in path.links)


def available_bandwidth(link: NetworkLink) -> float:
    """Max-min fair share of one link, de-rated by the medium throughput.

    Each of the ``sharing_users`` flows gets an equal split of the raw link
    bandwidth; only ``medium_throughput`` of that split is usable payload.
    """
    if link.sharing_users < 1:
        raise InvalidLinkError("sharing_users must be >= 1")
    if not 0.0 < link.medium_throughput <= 1.0:
        raise InvalidLinkError("medium_throughput must be in (0, 1]")
    return link_bandwidth(link) / link.sharing_users * link.medium_throughput


def available_path_bandwidth(path: NetworkPath) -> float:
    """Usable path bandwidth: minimum of the per-link fair shares."""
    if not path.links:
        raise EmptyPathError("path has no links")
    return min(available_bandwidth(link) for link in path.links)


def link_delay(link: NetworkLink) -> float:
    """Round-trip latency of one link: twice the sum of its four components."""
    components = (
        link.queuing_delay,
        link.transmission_delay,
        link.propagation_delay,
        link.processing_delay,
    )
    if any(c < 0 for c in components):
        raise InvalidLinkError("delay components must be >= 0")
    return 2.0 * sum(components)


def path_delay(path: NetworkPath) -> float:
    """One-way latency of a path: component sums over all intermediate links."""
    if not path.links:
        raise EmptyPathError("path has no links")
    total = 0.0
    for link in path.links:
        if min(link.queuing_delay, link.transmission_delay,
               link.propagation_delay, link.processing_delay) < 0:
            raise InvalidLinkError("delay components must be >= 0")
        total += (link.queuing_delay + link.transmission_delay
                  + link.propagation_delay + link.processing_delay)
    return total


def processing_delay(frame_length: float, transmission_rate: float) -> float:
    """Per-frame header processing time: frame length over transmission rate."""
    if transmission_rate <= 0:
        raise InvalidLinkError("transmission_rate must be > 0")
    if frame_length < 0:
        raise InvalidLinkError("frame_length must be >= 0")
    return frame_length / transmission_rate


def serialization_rounds(packet_size: float, capacities: list[float]) -> int:
    """Number of serialization rounds a packet needs across the given hops."""
    if packet_size < 0:
        raise InvalidLinkError("packet size must be >= 0")
    inv = 0.0
    for c in capacities:
        if c <= 0:
            raise InvalidLinkError("link capacity must be > 0")
        inv += 1.0 / c
    return math.ceil(packet_size * inv)


def packetized_delay(packet_size: float, path: NetworkPath, include_queuing: bool = False) -> float:
    """Path delay for a packet of ``packet_size`` bits.

    The per-round latency is the path's processing delay plus the fixed
    per-hop overheads (plus queuing when enabled), multiplied by the number
    of serialization rounds the packet needs.
    """
    if not path.links:
        raise EmptyPathError("path has no links")
    rounds = serialization_rounds(packet_size, [l.capacity for l in path.links])
    pr_dp = sum(l.processing_delay for l in path.links)
    overhead = sum(l.const_overhead for l in path.links)
    base = pr_dp + overhead
    if include_queuing:
        base += sum(l.queuing_delay for l in path.links)
    return rounds * base


def propagation_delay_for_distance(distance_km: float, medium: str = "wired") -> float:
    """Propagation delay in seconds for a span of the given medium."""
    per_km = WIRED_US_PER_KM if medium == "wired" else MICROWAVE_US_PER_KM
    return distance_km * per_km * 1e-6
