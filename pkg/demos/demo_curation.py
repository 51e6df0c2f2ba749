#!/usr/bin/env python3
"""Demo: End-to-End Curation

Builds a small multi-language repository in a temp dir, runs every stage and prints the funnel.
"""
import json
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, '.')

from core.pipeline import run_pipeline

PYTHON_SOURCE = '''
def merge_intervals(intervals: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Merge overlapping closed intervals.

    Args:
        intervals: Pairs of (start, end) with start <= end.

    Returns:
        Merged intervals sorted by start.
    """
    merged = []
    for start, end in sorted(intervals):
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return merged


def merge_ranges(ranges: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Merge overlapping closed ranges.

    Args:
        ranges: Pairs of (start, end) with start <= end.

    Returns:
        Merged ranges sorted by start.
    """
    merged = []
    for start, end in sorted(ranges):
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return merged


def test_merge_intervals():
    """Check that touching intervals are merged into one."""
    result = merge_intervals([(1, 2), (2, 3)])
    assert result == [(1, 3)]
    assert merge_intervals([]) == []
    assert merge_intervals([(5, 6)]) == [(5, 6)]
    assert len(result) == 1


def get_name(self):
    """Get the name."""
    return self.name
'''

JAVASCRIPT_SOURCE = '''
/**
 * Group items into buckets keyed by the result of a callback.
 * @param {Array} items - Values to group.
 * @param {Function} keyOf - Returns the bucket key for an item.
 * @returns {Object} Buckets of items per key.
 */
function groupBy(items, keyOf) {
  const buckets = {};
  for (const item of items) {
    const key = keyOf(item);
    if (!(key in buckets)) {
      buckets[key] = [];
    }
    buckets[key].push(item);
  }
  return buckets;
}
'''

JAVA_SOURCE = '''
public class Checksums {
    /**
     * Compute the Adler-32 checksum of a byte array.
     *
     * @param data bytes to checksum
     * @return the checksum packed into an int
     */
    public static int adler32(byte[] data) {
        int a = 1;
        int b = 0;
        for (byte value : data) {
            a = (a + (value & 0xff)) % 65521;
            b = (b + a) % 65521;
        }
        return (b << 16) | a;
    }
}
'''


def build_repository(root: Path) -> Path:
    repo = root / "toolbox"
    (repo / "src").mkdir(parents=True)
    (repo / "src" / "intervals.py").write_text(PYTHON_SOURCE)
    (repo / "src" / "group.js").write_text(JAVASCRIPT_SOURCE)
    (repo / "src" / "Checksums.java").write_text(JAVA_SOURCE)

    manifest = root / "repos.json"
    manifest.write_text(json.dumps({"repositories": [{"repo_name": "toolbox", "root_path": "toolbox"}]}))
    return manifest


def main():
    with tempfile.TemporaryDirectory() as tmp:
        tmp_path = Path(tmp)
        manifest = build_repository(tmp_path)
        summary = run_pipeline(None, manifest, tmp_path / "out")

        print("--- Funnel ---")
        for stage, count in summary.manifest.funnel.rows():
            print(f"  {stage:20} {count}")

        print("\n--- Rejects ---")
        for stage, rows in summary.rejects.items():
            for row in rows:
                print(f"  [{stage}] {row['id']}: {row['reason']}")

        print("\n--- Dataset ---")
        for line in (tmp_path / "out" / "dataset.jsonl").read_text().splitlines():
            sample = json.loads(line)
            print(f"  {sample['id']}  quality={sample['quality_score']:.2f}  split={sample['split']}")


if __name__ == "__main__":
    main()
