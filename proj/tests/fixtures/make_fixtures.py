#!/usr/bin/env python3
# Copyright 2026 The Glint Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes the hand-authored glTF fixtures. Output is committed; rerun only
when a fixture changes."""

import base64
import json
import math
import struct
from pathlib import Path

HERE = Path(__file__).resolve().parent


def pack(fmt, values):
    return b"".join(struct.pack("<" + fmt, *v) if isinstance(v, tuple) else struct.pack("<" + fmt, v)
                    for v in values)


def pad4(data, fill=b"\0"):
    return data + fill * (-len(data) % 4)


def icosphere(subdivisions, radius=1.0):
    t = (1 + 5 ** 0.5) / 2
    verts = [(-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0), (0, -1, t), (0, 1, t),
             (0, -1, -t), (0, 1, -t), (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1)]
    verts = [tuple(c / math.sqrt(sum(x * x for x in v)) for c in v) for v in verts]
    faces = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11), (1, 5, 9), (5, 11, 4),
             (11, 10, 2), (10, 7, 6), (7, 1, 8), (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8),
             (3, 8, 9), (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)]
    for _ in range(subdivisions):
        cache = {}

        def mid(a, b):
            key = (min(a, b), max(a, b))
            if key not in cache:
                m = [(verts[a][i] + verts[b][i]) / 2 for i in range(3)]
                n = math.sqrt(sum(x * x for x in m))
                verts.append(tuple(x / n for x in m))
                cache[key] = len(verts) - 1
            return cache[key]

        nxt = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            nxt += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = nxt
    return [tuple(radius * x for x in v) for v in verts], faces


class Builder:
    """Accumulates one binary buffer plus views and accessors."""

    def __init__(self):
        self.blob = b""
        self.views = []
        self.accessors = []

    def _view(self, data, target):
        self.blob = pad4(self.blob)
        self.views.append({"buffer": 0, "byteOffset": len(self.blob), "byteLength": len(data),
                           "target": target})
        self.blob += data
        return len(self.views) - 1

    def vec3(self, values):
        view = self._view(pack("fff", values), 34962)
        lo = [min(v[i] for v in values) for i in range(3)]
        hi = [max(v[i] for v in values) for i in range(3)]
        self.accessors.append({"bufferView": view, "componentType": 5126, "count": len(values),
                               "type": "VEC3", "min": lo, "max": hi})
        return len(self.accessors) - 1

    def indices(self, faces, component=5125):
        flat = [i for f in faces for i in f]
        fmt = {5121: "B", 5123: "H", 5125: "I"}[component]
        view = self._view(pack(fmt, flat), 34963)
        self.accessors.append({"bufferView": view, "componentType": component,
                               "count": len(flat), "type": "SCALAR"})
        return len(self.accessors) - 1

    def document(self, meshes, nodes, materials, scene_nodes, uri):
        buf = {"byteLength": len(self.blob)}
        if uri is not None:
            buf["uri"] = uri
        return {"asset": {"version": "2.0", "generator": "glint fixtures"},
                "scene": 0, "scenes": [{"nodes": scene_nodes}], "nodes": nodes, "meshes": meshes,
                "materials": materials, "buffers": [buf], "bufferViews": self.views,
                "accessors": self.accessors}


TRIANGLE = [(-1.0, -1.0, 0.0), (1.0, -1.0, 0.0), (0.0, 1.0, 0.0)]


def embedded(doc_builder, **kw):
    uri = "data:application/octet-stream;base64," + base64.b64encode(doc_builder.blob).decode()
    return doc_builder.document(uri=uri, **kw)


def write_json(name, doc):
    (HERE / name).write_text(json.dumps(doc, indent=1) + "\n")


def write_glb(name, doc, blob):
    js = pad4(json.dumps(doc, separators=(",", ":")).encode(), b" ")
    bin_chunk = pad4(blob)
    total = 12 + 8 + len(js) + 8 + len(bin_chunk)
    out = struct.pack("<III", 0x46546C67, 2, total)
    out += struct.pack("<II", len(js), 0x4E4F534A) + js
    out += struct.pack("<II", len(bin_chunk), 0x004E4942) + bin_chunk
    (HERE / name).write_bytes(out)


def triangle_fixtures():
    def base(node_extra=None, mode=None, second_node=False, material="steel_polished"):
        b = Builder()
        pos = b.vec3(TRIANGLE)
        nrm = b.vec3([(0.0, 0.0, 1.0)] * 3)
        idx = b.indices([(0, 1, 2)], 5123)
        prim = {"attributes": {"POSITION": pos, "NORMAL": nrm}, "indices": idx, "material": 0}
        if mode is not None:
            prim["mode"] = mode
        node = {"name": "triangle", "mesh": 0}
        node.update(node_extra or {})
        nodes = [node]
        if second_node:
            nodes.append({"name": "copy", "mesh": 0, "translation": [3.0, 0.0, 0.0]})
        return embedded(b, meshes=[{"name": "tri", "primitives": [prim]}], nodes=nodes,
                        materials=[{"name": material,
                                    "pbrMetallicRoughness": {"baseColorFactor": [0.9, 0.6, 0.3, 1],
                                                             "metallicFactor": 0.0,
                                                             "roughnessFactor": 0.8}}],
                        scene_nodes=list(range(len(nodes))))

    write_json("triangle.gltf", base())
    write_json("scaled.gltf", base({"scale": [2.0, 2.0, 2.0]}))
    write_json("instanced.gltf", base(second_node=True))
    write_json("lines.gltf", base(mode=1))
    (HERE / "malformed.gltf").write_text('{"asset": {"version": "2.0"}, "meshes": [\n')


def icosphere_fixture():
    verts, faces = icosphere(2)
    b = Builder()
    pos = b.vec3(verts)
    idx = b.indices(faces)
    prim = {"attributes": {"POSITION": pos}, "indices": idx, "material": 0}
    doc = b.document(meshes=[{"name": "icosphere", "primitives": [prim]}],
                     nodes=[{"name": "ball", "mesh": 0}],
                     materials=[{"name": "paint_red",
                                 "pbrMetallicRoughness": {"baseColorFactor": [0.8, 0.1, 0.1, 1],
                                                          "metallicFactor": 0.0,
                                                          "roughnessFactor": 0.5}}],
                     scene_nodes=[0], uri="icosphere.bin")
    (HERE / "icosphere.bin").write_bytes(b.blob)
    write_json("icosphere.gltf", doc)


def stretched_fixture():
    # Unit sphere with exact normals; the node scales it by (1, 2, 1).
    verts, faces = icosphere(2)
    b = Builder()
    pos = b.vec3(verts)
    nrm = b.vec3(verts)
    idx = b.indices(faces)
    prim = {"attributes": {"POSITION": pos, "NORMAL": nrm}, "indices": idx}
    doc = b.document(meshes=[{"name": "sphere", "primitives": [prim]}],
                     nodes=[{"name": "root", "children": [1], "translation": [0.5, 0.0, 0.0]},
                            {"name": "stretched", "mesh": 0, "scale": [1.0, 2.0, 1.0],
                             "rotation": [0.0, 0.0, 0.0, 1.0]}],
                     materials=[], scene_nodes=[0], uri=None)
    del doc["materials"]
    write_glb("stretched.glb", doc, b.blob)


def furnace_fixture():
    verts, faces = icosphere(4)
    b = Builder()
    pos = b.vec3(verts)
    nrm = b.vec3(verts)
    idx = b.indices(faces)
    prim = {"attributes": {"POSITION": pos, "NORMAL": nrm}, "indices": idx, "material": 0}
    doc = b.document(meshes=[{"name": "sphere", "primitives": [prim]}],
                     nodes=[{"name": "sphere", "mesh": 0}],
                     materials=[{"name": "grey"}], scene_nodes=[0], uri=None)
    write_glb("furnace_sphere.glb", doc, b.blob)


if __name__ == "__main__":
    triangle_fixtures()
    icosphere_fixture()
    stretched_fixture()
    furnace_fixture()
