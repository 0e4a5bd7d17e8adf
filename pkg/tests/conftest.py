"""Shared helpers for the test suite."""

import numpy as np


def partition_errors(labels, truth) -> int:
    """Points that disagree with the majority ground-truth block of their cluster."""
    labels = np.asarray(labels)
    truth = np.asarray(truth)
    errors = 0
    for lab in np.unique(labels):
        members = truth[labels == lab]
        _, counts = np.unique(members, return_counts=True)
        errors += members.size - int(counts.max())
    return errors


def block_minmax(C, truth):
    """(min within-block entry, max across-block entry) of a square matrix."""
    truth = np.asarray(truth)
    same = truth[:, None] == truth[None, :]
    off = ~np.eye(truth.size, dtype=bool)
    return float(C[same & off].min()), float(C[~same].max())


def greedy_reference(C, s):
    """Scalar re-implementation of the lowest-index greedy pass."""
    C = np.asarray(C, dtype=float)
    n = C.shape[0]
    labels = [-1] * n
    seeds = []
    c = 0
    while True:
        unassigned = [i for i in range(n) if labels[i] < 0]
        if not unassigned:
            break
        pick = unassigned[0]
        for j in unassigned:
            if C[pick][j] >= s:
                labels[j] = c
        seeds.append(pick)
        c += 1
    return labels, seeds, c
