"""Airborne TDMA MAC with piggybacked delayed ACK: timing, codecs, closed-form
model, relay-chain simulator and experiment harness."""

__version__ = "0.1.0"
