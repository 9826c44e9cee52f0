#!/usr/bin/env python3
"""Independent BM25 reference over fixtures/kb; writes fixtures/oracle/bm25_expected.json."""
import json
import math
import os
import re

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")
K1, B = 1.2, 0.75

QUERIES = [
    ("function", "clip landsat image to region", None, None, 5),
    ("function", "clip landsat image to region", "Google Earth Engine", None, 5),
    ("function", "export GeoTIFF to drive", "google earth engine", "javascript", 5),
    ("function", "normalizedDifference NDVI", None, None, 8),
    ("function", "buffer point geodesic circular area", "ArcGIS API for Python", "Python", 5),
    ("function", "average precipitation raster array", "Python GDAL", None, 5),
    ("function", "write raster GeoTIFF", "R - Raster package", "R", 5),
    ("function", "interactive map HTML overlay", "Python - Folium", "python", 5),
    ("function", "median composite filterDate", None, "JavaScript", 10),
    ("function", "ReadAsArray", None, None, 3),
    ("function", "nothing matches zzzqqq", None, None, 5),
    ("dataset", "MODIS fire thermal anomalies", None, None, 5),
    ("dataset", "MODIS fire thermal anomalies", "Google Earth Engine", None, 5),
    ("dataset", "land cover 2020", None, None, 6),
    ("dataset", "land cover 2020", "ArcGIS API for Python", None, 5),
    ("dataset", "CHIRPS precipitation", "Python GDAL", None, 5),
    ("dataset", "landsat surface reflectance", "PIE Engine", None, 5),
    ("dataset", "country boundaries", None, None, 5),
    ("platform", "Google Earth Engine", None, None, 5),
    ("platform", "Python library raster", None, None, 5),
]


def tokenize(text):
    out = []
    for chunk in re.split(r"[^A-Za-z0-9\u0080-\U0010ffff]+", text):
        if not chunk:
            continue
        spaced = re.sub(r"(?<=[a-z])(?=[A-Z])|(?<=[A-Z])(?=[A-Z][a-z])", " ", chunk)
        out.extend(part.lower() for part in spaced.split(" ") if part)
    return out


def doc_text(kind, rec):
    if kind == "platform":
        return rec["Name"] + " " + rec["Description"]
    if kind == "function":
        return " ".join([rec["Full_name"], rec["Short_name"], rec["Description"], rec["Usage"]])
    return rec["Name"] + " " + rec["Description"] + " " + " ".join(rec["Tags"])


def doc_id(kind, rec):
    return rec[{"platform": "Platform_id", "function": "Operator_id", "dataset": "Dataset_id"}[kind]]


def admits(kind, rec, platform, language):
    if platform is not None and kind != "platform":
        if rec.get("Platform", "").lower() != platform.lower():
            return False
    if language is not None and kind == "function":
        if rec["Language"].lower() != language.lower():
            return False
    return True


def search(kind, records, query, platform, language, k):
    docs = [tokenize(doc_text(kind, r)) for r in records]
    n = len(docs)
    avg = sum(len(d) for d in docs) / n
    scores = [0.0] * n
    for term in sorted(set(tokenize(query))):
        df = sum(1 for d in docs if term in d)
        if df == 0:
            continue
        idf = math.log(1.0 + (n - df + 0.5) / (df + 0.5))
        for i, d in enumerate(docs):
            tf = d.count(term)
            if tf == 0 or not admits(kind, records[i], platform, language):
                continue
            scores[i] += idf * (tf * (K1 + 1.0)) / (tf + K1 * (1.0 - B + B * len(d) / avg))
    ranked = sorted((i for i in range(n) if scores[i] > 0), key=lambda i: (-scores[i], doc_id(kind, records[i])))
    return [{"record_id": doc_id(kind, records[i]), "score": scores[i]} for i in ranked[:k]]


def main():
    kbs = {}
    for kind in ("platform", "function", "dataset"):
        with open(os.path.join(ROOT, "kb", kind + ".json"), encoding="utf-8") as f:
            kbs[kind] = json.load(f)
    cases = []
    for kind, query, platform, language, k in QUERIES:
        cases.append({
            "kind": kind, "query": query, "platform": platform, "language": language, "k": k,
            "hits": search(kind, kbs[kind], query, platform, language, k),
        })
    os.makedirs(os.path.join(ROOT, "oracle"), exist_ok=True)
    with open(os.path.join(ROOT, "oracle", "bm25_expected.json"), "w", encoding="utf-8") as f:
        json.dump(cases, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
