"""Regenerates the bundled sample datasets. Output is deterministic."""
import json
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))


def write_pgm(path, rows):
    h, w = len(rows), len(rows[0])
    maxval = max(1, max(max(r) for r in rows))
    with open(path, "w") as f:
        f.write(f"P2\n{w} {h}\n{maxval}\n")
        for r in rows:
            f.write(" ".join(str(v) for v in r) + "\n")


def disk(rows, cx, cy, r, value):
    for y in range(len(rows)):
        for x in range(len(rows[0])):
            if (x - cx) ** 2 + (y - cy) ** 2 <= r * r:
                rows[y][x] = value


def rect(rows, x0, y0, x1, y1, value):
    for y in range(y0, y1):
        for x in range(x0, x1):
            rows[y][x] = value


def blank(w, h):
    return [[0] * w for _ in range(h)]


def semantic(rng):
    out = os.path.join(HERE, "sems")
    os.makedirs(os.path.join(out, "masks"), exist_ok=True)
    lines = []
    patients = ["p1", "p1", "p2", "p2", "p3", "p3"]
    sexes = {"p1": "f", "p2": "m", "p3": "f"}
    for i, patient in enumerate(patients):
        w = h = 48
        ref, pred = blank(w, h), blank(w, h)
        cx, cy, r = rng.randint(14, 20), rng.randint(14, 20), rng.randint(6, 10)
        disk(ref, cx, cy, r, 1)
        disk(pred, cx + rng.randint(-2, 2), cy + rng.randint(-2, 2), r + rng.randint(-2, 2), 1)
        x0, y0 = rng.randint(28, 34), rng.randint(28, 34)
        rect(ref, x0, y0, x0 + rng.randint(5, 10), y0 + rng.randint(3, 8), 2)
        if i != 3:  # item 3 misses class 2 entirely
            dx, dy = rng.randint(-1, 1), rng.randint(-1, 1)
            rect(pred, x0 + dx, y0 + dy, x0 + dx + rng.randint(5, 10), y0 + dy + rng.randint(3, 8), 2)
        item = f"case{i:02d}"
        write_pgm(os.path.join(out, "masks", f"{item}_ref.pgm"), ref)
        write_pgm(os.path.join(out, "masks", f"{item}_pred.pgm"), pred)
        lines.append({"item_id": item, "reference": f"masks/{item}_ref.pgm",
                      "prediction": f"masks/{item}_pred.pgm", "spacing": [1.0, 1.0],
                      "meta.patient": patient, "meta.sex": sexes[patient]})
    with open(os.path.join(out, "manifest.jsonl"), "w") as f:
        for line in lines:
            f.write(json.dumps(line) + "\n")


def classification(rng):
    out = os.path.join(HERE, "imlc")
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, "items.csv"), "w") as f:
        f.write("item_id,ref_class,score_0,score_1,score_2,meta.site\n")
        for i in range(60):
            ref = rng.choice([0, 0, 0, 1, 1, 2])
            raw = [rng.random() for _ in range(3)]
            raw[ref] += 0.8
            total = sum(raw)
            s = [round(v / total, 3) for v in raw]
            s[2] = round(1.0 - s[0] - s[1], 3)
            f.write(f"img{i:03d},{ref},{s[0]},{s[1]},{s[2]},{'a' if i % 2 else 'b'}\n")


def detection(rng):
    out = os.path.join(HERE, "obd")
    os.makedirs(out, exist_ok=True)
    images, refs, preds = [], [], []
    for i in range(8):
        image = f"scan{i}"
        images.append({"image_id": image, "meta.scanner": "s1" if i < 4 else "s2"})
        for _ in range(rng.randint(0, 3)):
            x, y = rng.randint(0, 80), rng.randint(0, 80)
            w, h = rng.randint(8, 16), rng.randint(8, 16)
            refs.append({"image_id": image, "class": 1,
                         "geometry": {"type": "box", "coords": [x, y, x + w, y + h]}})
            if rng.random() < 0.8:
                dx, dy = rng.randint(-1, 1), rng.randint(-1, 1)
                preds.append({"image_id": image, "class": 1, "score": round(rng.uniform(0.4, 0.99), 2),
                              "geometry": {"type": "box", "coords": [x + dx, y + dy, x + dx + w, y + dy + h]}})
        for _ in range(rng.randint(0, 2)):
            x, y = rng.randint(0, 80), rng.randint(0, 80)
            preds.append({"image_id": image, "class": 1, "score": round(rng.uniform(0.05, 0.7), 2),
                          "geometry": {"type": "box", "coords": [x, y, x + 10, y + 10]}})
    for name, rows in (("images.jsonl", images), ("references.jsonl", refs), ("predictions.jsonl", preds)):
        with open(os.path.join(out, name), "w") as f:
            for r in rows:
                f.write(json.dumps(r) + "\n")


if __name__ == "__main__":
    rng = random.Random(20240611)
    semantic(rng)
    classification(rng)
    detection(rng)
