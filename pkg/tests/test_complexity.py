"""Hand-counted cyclomatic complexity per language."""

import textwrap

import pytest

SOURCE_FILES = {
    "py": "complexity.py",
    "java": "Ops.java",
    "js": "complexity.js",
    "ts": "complexity.ts",
    "cpp": "complexity.cpp",
}


def only(records, name):
    (record,) = [r for r in records if r.name == name]
    return record.complexity


def source_for(suffix, snippet):
    if suffix == "java":
        return "class Ops {\n" + snippet + "\n}\n"
    return snippet + "\n"


def with_extra_branch(suffix, snippet):
    """Insert one ``if`` statement at the top of the function body."""
    lines = snippet.split("\n")
    opener = ":" if suffix == "py" else "{"
    head = next(i for i, line in enumerate(lines) if line.rstrip().endswith(opener))
    body = lines[head + 1]
    indent = body[: len(body) - len(body.lstrip())]
    if suffix == "py":
        branch = [f"{indent}if flag:", f"{indent}    pass"]
    else:
        branch = [f"{indent}if (flag) {{", f"{indent}}}"]
    return "\n".join(lines[: head + 1] + branch + lines[head + 1 :])


def cases(suffix, entries):
    return [
        pytest.param(suffix, name, expected, textwrap.dedent(source).strip("\n"), id=f"{suffix}-{name}")
        for name, expected, source in entries
    ]


PYTHON_CASES = cases(
    "py",
    [
        (
            "straight",
            1,
            """
            def straight(a, b):
                total = a + b
                return total
            """,
        ),
        (
            "if_and_for",
            3,
            """
            def if_and_for(items):
                for item in items:
                    if item:
                        print(item)
            """,
        ),
        (
            "chain",
            3,
            """
            def chain(x):
                if x > 10:
                    return "big"
                elif x > 5:
                    return "medium"
                else:
                    return "small"
            """,
        ),
        # for, if, and, elif, or, while, two excepts, conditional expression
        (
            "mixed",
            10,
            """
            def mixed(values, limit):
                total = 0
                for v in values:
                    if v > limit and v % 2:
                        total += v
                    elif v < 0 or v is None:
                        total -= 1
                while total > 100:
                    total //= 2
                try:
                    check(total)
                except ValueError:
                    total = 0
                except (KeyError, TypeError):
                    total = -1
                return total if total else None
            """,
        ),
        (
            "comprehension",
            3,
            """
            def comprehension(rows):
                return [r for r in rows if r]
            """,
        ),
        (
            "matcher",
            3,
            """
            def matcher(command):
                match command:
                    case "start":
                        return 1
                    case "stop":
                        return 2
                    case _:
                        return 0
            """,
        ),
        # case 0 and the guard count; the capture pattern and the wildcard do not
        (
            "sign",
            3,
            """
            def sign(n):
                match n:
                    case 0:
                        return 0
                    case x if x > 0:
                        return 1
                    case _:
                        return -1
            """,
        ),
        (
            "describe",
            2,
            """
            def describe(value):
                match value:
                    case None:
                        return "none"
                    case other:
                        return str(other)
            """,
        ),
        (
            "drain",
            2,
            """
            def drain(queue):
                while queue:
                    queue.pop()
                else:
                    log("empty")
            """,
        ),
        (
            "grid",
            3,
            """
            def grid(rows, cols):
                cells = []
                for r in range(rows):
                    for c in range(cols):
                        cells.append((r, c))
                return cells
            """,
        ),
        (
            "any_of",
            4,
            """
            def any_of(a, b, c, d):
                return a and b and c or d
            """,
        ),
        (
            "close_quietly",
            1,
            """
            def close_quietly(handle):
                try:
                    handle.close()
                finally:
                    handle = None
            """,
        ),
        (
            "read_all",
            1,
            """
            def read_all(path):
                with open(path) as handle:
                    return handle.read()
            """,
        ),
        (
            "by_size",
            2,
            """
            def by_size(items):
                return sorted(items, key=lambda x: x.size if x else 0)
            """,
        ),
        (
            "flatten",
            4,
            """
            def flatten(grid):
                return [cell for row in grid for cell in row if cell]
            """,
        ),
        (
            "consume",
            3,
            """
            async def consume(stream):
                async for item in stream:
                    if item is None:
                        break
            """,
        ),
        (
            "load",
            3,
            """
            def load(path):
                try:
                    return read(path)
                except FileNotFoundError:
                    return None
                except PermissionError:
                    raise
                else:
                    pass
            """,
        ),
        (
            "pick",
            3,
            """
            def pick(x, y):
                return "a" if x else "b" if y else "c"
            """,
        ),
        (
            "check",
            2,
            """
            def check(value):
                assert value is not None
                if value < 0:
                    raise ValueError(value)
                return value
            """,
        ),
        (
            "spin",
            4,
            """
            def spin(counter):
                while True:
                    counter -= 1
                    if counter <= 0 or counter == 7:
                        break
                return counter
            """,
        ),
    ],
)

JAVA_CASES = cases(
    "java",
    [
        (
            "straight",
            1,
            """
            void straight() {
                int a = 1;
                int b = a + 1;
            }
            """,
        ),
        (
            "dispatch",
            3,
            """
            int dispatch(int code) {
                switch (code) {
                    case 1:
                        return 10;
                    case 2:
                        return 20;
                    default:
                        return 0;
                }
            }
            """,
        ),
        # for-each, if, &&, ||, catch, do-while, ternary
        (
            "guarded",
            8,
            """
            int guarded(int[] values) {
                int count = 0;
                for (int v : values) {
                    if (v > 0 && v < 100 || v == -1) {
                        count++;
                    }
                }
                try {
                    risky();
                } catch (IllegalStateException e) {
                    count = -1;
                }
                do {
                    count--;
                } while (count > 10);
                return count > 0 ? count : 0;
            }
            """,
        ),
        (
            "grade",
            3,
            """
            String grade(int score) {
                if (score > 90) {
                    return "A";
                } else if (score > 80) {
                    return "B";
                } else {
                    return "C";
                }
            }
            """,
        ),
        (
            "sum",
            2,
            """
            int sum(int[] values) {
                int total = 0;
                for (int i = 0; i < values.length; i++) {
                    total += values[i];
                }
                return total;
            }
            """,
        ),
        (
            "halve",
            2,
            """
            int halve(int n) {
                while (n > 1) {
                    n /= 2;
                }
                return n;
            }
            """,
        ),
        (
            "load",
            3,
            """
            void load(String path) {
                try {
                    read(path);
                } catch (IOException e) {
                    log(e);
                } catch (RuntimeException e) {
                    throw e;
                } finally {
                    close();
                }
            }
            """,
        ),
        (
            "clamp",
            2,
            """
            List<Integer> clamp(List<Integer> values) {
                return values.stream().map(v -> v > 0 ? v : 0).collect(Collectors.toList());
            }
            """,
        ),
        (
            "valid",
            3,
            """
            boolean valid(int a, int b) {
                return a > 0 && b > 0 && a != b;
            }
            """,
        ),
        (
            "mask",
            1,
            """
            int mask(int a, int b) {
                return (a & b) | (a ^ b);
            }
            """,
        ),
        (
            "cells",
            3,
            """
            int cells(int rows, int cols) {
                int count = 0;
                for (int r = 0; r < rows; r++) {
                    for (int c = 0; c < cols; c++) {
                        count++;
                    }
                }
                return count;
            }
            """,
        ),
        (
            "countdown",
            2,
            """
            int countdown(int n) {
                do {
                    n--;
                } while (n > 0);
                return n;
            }
            """,
        ),
        (
            "weight",
            3,
            """
            int weight(String size) {
                return switch (size) {
                    case "S" -> 1;
                    case "M" -> 2;
                    default -> 3;
                };
            }
            """,
        ),
        (
            "Ops",
            2,
            """
            Ops(int size) {
                if (size < 0) {
                    throw new IllegalArgumentException();
                }
            }
            """,
        ),
        (
            "first",
            3,
            """
            int first(int[] values) {
                for (int v : values) {
                    if (v != 0) {
                        return v;
                    }
                }
                return -1;
            }
            """,
        ),
        (
            "blank",
            3,
            """
            boolean blank(String s) {
                return s == null || s.isEmpty() || s.trim().isEmpty();
            }
            """,
        ),
        (
            "sign",
            3,
            """
            int sign(int n) {
                return n > 0 ? 1 : n < 0 ? -1 : 0;
            }
            """,
        ),
        # one per case label, fallthrough included
        (
            "days",
            6,
            """
            int days(int month) {
                switch (month) {
                    case 2:
                        return 28;
                    case 4:
                    case 6:
                    case 9:
                    case 11:
                        return 30;
                    default:
                        return 31;
                }
            }
            """,
        ),
        (
            "scan",
            4,
            """
            int scan(int[] data) {
                int i = 0;
                while (true) {
                    if (data[i] < 0 || i >= data.length - 1) {
                        break;
                    }
                    i++;
                }
                return i;
            }
            """,
        ),
        (
            "release",
            1,
            """
            void release(Lock lock) {
                try {
                    work();
                } finally {
                    lock.unlock();
                }
            }
            """,
        ),
    ],
)

JAVASCRIPT_CASES = cases(
    "js",
    [
        (
            "straight",
            1,
            """
            function straight(a) {
              const b = a * 2;
              return b;
            }
            """,
        ),
        (
            "chain",
            3,
            """
            function chain(x) {
              if (x > 10) {
                return 'big';
              } else if (x > 5) {
                return 'medium';
              } else {
                return 'small';
              }
            }
            """,
        ),
        # for, for-in, while, catch, ||, ternary, &&
        (
            "loops",
            8,
            """
            function loops(items, fallback) {
              for (let i = 0; i < items.length; i++) {}
              for (const key in items) {}
              while (items.length) items.pop();
              try {
                parse(items);
              } catch (err) {
                return fallback || null;
              }
              return items.length ? items : fallback && [];
            }
            """,
        ),
        (
            "withCallback",
            2,
            """
            function withCallback(items) {
              return items.map((item) => (item ? item.id : null));
            }
            """,
        ),
        (
            "route",
            3,
            """
            function route(kind) {
              switch (kind) {
                case 'a':
                  return 1;
                case 'b':
                  return 2;
                default:
                  return 0;
              }
            }
            """,
        ),
        (
            "total",
            2,
            """
            function total(items) {
              let sum = 0;
              for (const item of items) {
                sum += item.price;
              }
              return sum;
            }
            """,
        ),
        (
            "drain",
            2,
            """
            function drain(queue) {
              do {
                queue.shift();
              } while (queue.length > 0);
            }
            """,
        ),
        (
            "evens",
            3,
            """
            function* evens(limit) {
              for (let i = 0; i < limit; i++) {
                if (i % 2 === 0) yield i;
              }
            }
            """,
        ),
        (
            "allOf",
            3,
            """
            function allOf(a, b, c) {
              return a && b && c;
            }
            """,
        ),
        (
            "eitherNot",
            3,
            """
            function eitherNot(a, b, c) {
              return (a || b) && !c;
            }
            """,
        ),
        (
            "release",
            1,
            """
            function release(lock) {
              try {
                lock.run();
              } finally {
                lock.free();
              }
            }
            """,
        ),
        (
            "pairs",
            3,
            """
            function pairs(xs, ys) {
              const out = [];
              for (const x of xs) {
                for (const y of ys) {
                  out.push([x, y]);
                }
              }
              return out;
            }
            """,
        ),
        (
            "kind",
            4,
            """
            function kind(code) {
              switch (code) {
                case 1:
                case 2:
                  return 'low';
                case 3:
                  return 'mid';
                default:
                  return 'high';
              }
            }
            """,
        ),
        (
            "describeSign",
            3,
            """
            function describeSign(n) {
              return n > 0 ? 'pos' : n < 0 ? 'neg' : 'zero';
            }
            """,
        ),
        (
            "seek",
            3,
            """
            function seek(items, target) {
              let i = 0;
              while (i < items.length) {
                if (items[i] === target) break;
                i++;
              }
              return i;
            }
            """,
        ),
        (
            "positives",
            2,
            """
            function positives(values) {
              return values.filter((v) => v > 0 && Number.isFinite(v));
            }
            """,
        ),
        (
            "parse",
            2,
            """
            function parse(text) {
              try {
                return JSON.parse(text);
              } catch (err) {
                return null;
              }
            }
            """,
        ),
        (
            "size",
            4,
            """
            function size(n) {
              if (n < 10) {
                return 's';
              } else if (n < 100) {
                return 'm';
              } else if (n < 1000) {
                return 'l';
              }
              return 'xl';
            }
            """,
        ),
        (
            "mask",
            1,
            """
            function mask(a, b, c) {
              return (a & b) | c;
            }
            """,
        ),
        (
            "area",
            3,
            """
            function area(w, h) {
              if (!w) return 0;
              if (!h) return 0;
              return w * h;
            }
            """,
        ),
    ],
)

TYPESCRIPT_CASES = cases(
    "ts",
    [
        (
            "pick",
            4,
            """
            function pick(values: number[], strict: boolean): number {
              let best = 0;
              for (const v of values) {
                if (strict && v > best) {
                  best = v;
                }
              }
              return best;
            }
            """,
        ),
        (
            "double",
            1,
            """
            function double(n: number): number {
              return n * 2;
            }
            """,
        ),
        (
            "label",
            2,
            """
            function label(value: string | number): string {
              if (typeof value === "string") {
                return value;
              }
              return value.toFixed(2);
            }
            """,
        ),
        # optional chaining is not a branch
        (
            "city",
            2,
            """
            function city(user?: { address?: { city: string } }): string {
              return user?.address?.city || "unknown";
            }
            """,
        ),
        (
            "firstOr",
            2,
            """
            function firstOr<T>(items: T[], fallback: T): T {
              return items.length > 0 ? items[0] : fallback;
            }
            """,
        ),
        (
            "parseAll",
            3,
            """
            function parseAll(lines: string[]): number[] {
              const out: number[] = [];
              for (const line of lines) {
                try {
                  out.push(JSON.parse(line));
                } catch {
                  continue;
                }
              }
              return out;
            }
            """,
        ),
        (
            "weight",
            3,
            """
            function weight(size: Size): number {
              switch (size) {
                case Size.Small:
                  return 1;
                case Size.Large:
                  return 3;
                default:
                  return 2;
              }
            }
            """,
        ),
        (
            "collatz",
            3,
            """
            function collatz(n: number): number {
              let steps = 0;
              while (n !== 1) {
                n = n % 2 === 0 ? n / 2 : 3 * n + 1;
                steps++;
              }
              return steps;
            }
            """,
        ),
        (
            "isPoint",
            3,
            """
            function isPoint(value: unknown): value is Point {
              return typeof value === "object" && value !== null && "x" in value;
            }
            """,
        ),
        (
            "fetchAll",
            2,
            """
            async function fetchAll(urls: string[]): Promise<string[]> {
              const results: string[] = [];
              for (const url of urls) {
                results.push(await get(url));
              }
              return results;
            }
            """,
        ),
        (
            "retry",
            3,
            """
            function retry(task: () => boolean, limit: number): boolean {
              let attempts = 0;
              do {
                attempts++;
              } while (!task() && attempts < limit);
              return attempts < limit;
            }
            """,
        ),
        (
            "clampTo",
            3,
            """
            function clampTo(value: number, low: number, high: number): number {
              if (value < low) {
                return low;
              } else if (value > high) {
                return high;
              }
              return value;
            }
            """,
        ),
        (
            "sum",
            2,
            """
            function sum(values: number[]): number {
              let total = 0;
              for (let i = 0; i < values.length; i++) {
                total += values[i];
              }
              return total;
            }
            """,
        ),
        (
            "names",
            2,
            """
            function names(users: User[]): string[] {
              return users.map((u) => (u.nick ? u.nick : u.name));
            }
            """,
        ),
        (
            "withLock",
            1,
            """
            function withLock(lock: Lock): void {
              try {
                lock.acquire();
              } finally {
                lock.release();
              }
            }
            """,
        ),
        (
            "port",
            3,
            """
            function port(env: Env): number {
              return Number(env.PORT) || Number(env.FALLBACK_PORT) || 8080;
            }
            """,
        ),
        (
            "keysWith",
            3,
            """
            function keysWith(obj: Record<string, number>, min: number): string[] {
              const keys: string[] = [];
              for (const key in obj) {
                if (obj[key] >= min) keys.push(key);
              }
              return keys;
            }
            """,
        ),
        (
            "isEmpty",
            1,
            """
            export function isEmpty(text: string): boolean {
              return text.trim().length === 0;
            }
            """,
        ),
        (
            "bucket",
            4,
            """
            function bucket(code: number): string {
              switch (code) {
                case 200:
                case 201:
                  return "ok";
                case 404:
                  return "missing";
              }
              return "error";
            }
            """,
        ),
        (
            "maxOf",
            4,
            """
            function maxOf(values: number[]): number | undefined {
              if (values.length === 0) return undefined;
              let best = values[0];
              for (const v of values) best = v > best ? v : best;
              return best;
            }
            """,
        ),
    ],
)

CPP_CASES = cases(
    "cpp",
    [
        (
            "straight",
            1,
            """
            int straight(int a) {
                return a + 1;
            }
            """,
        ),
        # range-for, if, ||, conditional, one case label, while
        (
            "classify",
            7,
            """
            int classify(const std::vector<int>& values) {
                int score = 0;
                for (int v : values) {
                    if (v < 0 || v > 100) {
                        continue;
                    }
                    score += v > 50 ? 2 : 1;
                }
                switch (score) {
                    case 0:
                        return -1;
                    default:
                        break;
                }
                while (score > 1000) {
                    score /= 2;
                }
                return score;
            }
            """,
        ),
        (
            "sign",
            3,
            """
            int sign(int n) {
                if (n > 0) {
                    return 1;
                } else if (n < 0) {
                    return -1;
                }
                return 0;
            }
            """,
        ),
        (
            "sum",
            2,
            """
            int sum(const int* values, int count) {
                int total = 0;
                for (int i = 0; i < count; ++i) {
                    total += values[i];
                }
                return total;
            }
            """,
        ),
        (
            "digits",
            2,
            """
            int digits(int n) {
                int count = 0;
                do {
                    n /= 10;
                    ++count;
                } while (n != 0);
                return count;
            }
            """,
        ),
        (
            "safeParse",
            3,
            """
            int safeParse(const std::string& text) {
                try {
                    return std::stoi(text);
                } catch (const std::invalid_argument&) {
                    return 0;
                } catch (...) {
                    return -1;
                }
            }
            """,
        ),
        (
            "inside",
            2,
            """
            bool inside(int v, int lo, int hi) {
                return v >= lo && v <= hi;
            }
            """,
        ),
        (
            "compare",
            3,
            """
            int compare(int n) {
                return n > 0 ? 1 : n < 0 ? -1 : 0;
            }
            """,
        ),
        (
            "width",
            4,
            """
            int width(char c) {
                switch (c) {
                    case 'a':
                    case 'b':
                        return 1;
                    case 'c':
                        return 2;
                    default:
                        return 0;
                }
            }
            """,
        ),
        (
            "skip",
            3,
            """
            int skip(const char* s) {
                int i = 0;
                while (s[i] == ' ' || s[i] == '_') {
                    ++i;
                }
                return i;
            }
            """,
        ),
        # the lambda body belongs to the enclosing function
        (
            "countPositive",
            2,
            """
            long countPositive(const std::vector<int>& v) {
                return std::count_if(v.begin(), v.end(), [](int x) { return x > 0 && x < 100; });
            }
            """,
        ),
        (
            "largest",
            2,
            """
            template <typename T>
            T largest(T a, T b) {
                return a > b ? a : b;
            }
            """,
        ),
        (
            "trace",
            4,
            """
            int trace(int m[3][3]) {
                int t = 0;
                for (int i = 0; i < 3; ++i) {
                    for (int j = 0; j < 3; ++j) {
                        if (i == j) t += m[i][j];
                    }
                }
                return t;
            }
            """,
        ),
        (
            "total",
            2,
            """
            int total(const std::vector<int>& values) {
                int sum = 0;
                for (int v : values) sum += v;
                return sum;
            }
            """,
        ),
        (
            "mix",
            1,
            """
            unsigned mix(unsigned a, unsigned b) {
                return (a & b) | (a ^ b);
            }
            """,
        ),
        (
            "validName",
            3,
            """
            bool validName(const std::string& name) {
                if (name.empty()) return false;
                if (name.size() > 64) return false;
                return std::isalpha(name[0]) != 0;
            }
            """,
        ),
        (
            "spin",
            3,
            """
            int spin(int n) {
                while (true) {
                    if (--n <= 0) break;
                }
                return n;
            }
            """,
        ),
        (
            "average",
            2,
            """
            double average(const double* xs, int n) {
                return n ? accumulate(xs, n) / n : 0.0;
            }
            """,
        ),
        (
            "route",
            3,
            """
            int route(int kind, int sub) {
                switch (kind) {
                    case 0:
                        return sub > 0 ? 1 : 2;
                    default:
                        return 0;
                }
            }
            """,
        ),
        (
            "edge",
            4,
            """
            bool edge(int x, int y, int n) {
                return x == 0 || y == 0 || (x == n - 1 && y == n - 1);
            }
            """,
        ),
    ],
)

ALL_CASES = PYTHON_CASES + JAVA_CASES + JAVASCRIPT_CASES + TYPESCRIPT_CASES + CPP_CASES


@pytest.mark.parametrize("suffix, name, expected, snippet", ALL_CASES)
def test_hand_counted_complexity(extract_source, suffix, name, expected, snippet):
    records = extract_source(SOURCE_FILES[suffix], source_for(suffix, snippet))
    assert only(records, name) == expected


@pytest.mark.parametrize("suffix, name, expected, snippet", ALL_CASES)
def test_one_more_branch_adds_one(extract_source, suffix, name, expected, snippet):
    records = extract_source(SOURCE_FILES[suffix], source_for(suffix, with_extra_branch(suffix, snippet)))
    assert only(records, name) == expected + 1


def test_python_wildcard_case_adds_nothing(extract_source):
    source = """
    def bucket(x):
        match x:
            case 1:
                return "one"
            case _:
                return "other"
    """
    assert only(extract_source("bucket.py", source), "bucket") == 2


def test_nested_python_function_counts_separately(extract_source):
    source = """
    def outer(flag):
        def inner(value):
            if value:
                return 1
            return 0

        if flag:
            return inner
        return None
    """
    records = extract_source("nested.py", source)
    assert only(records, "outer") == 2
    assert only(records, "inner") == 2


def test_nested_javascript_function_counts_separately(extract_source):
    source = """
    function outer(list) {
      function inner(x) {
        return x ? 1 : 0;
      }
      return list.map(inner);
    }
    """
    records = extract_source("nested.js", source)
    assert only(records, "outer") == 1
    assert only(records, "inner") == 2
