// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#include "glint/scene.hpp"

#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "glint/error.hpp"

namespace glint {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Camera and environment

std::vector<std::string> validate_camera(const CameraConfig &c) {
    std::vector<std::string> errors;
    if (!is_finite(c.position) || !is_finite(c.look_at) || !is_finite(c.up)) {
        errors.emplace_back("camera vectors must be finite");
        return errors;
    }
    const Vec3 view = c.look_at - c.position;
    if (length(view) <= 0) errors.emplace_back("camera position equals look_at");
    else if (length(cross(normalize(view), c.up)) < 1e-9)
        errors.emplace_back("camera up is parallel to the view direction");
    if (!(c.vertical_fov > 0 && c.vertical_fov < 180))
        errors.emplace_back("camera vertical_fov must be in (0, 180) degrees");
    if (c.width < 1 || c.height < 1) errors.emplace_back("camera width/height must be >= 1");
    return errors;
}

EnvironmentConfig EnvironmentConfig::uniform(const Vec3 &radiance) {
    EnvironmentConfig env;
    env.kind = Kind::uniform;
    env.radiance = radiance;
    return env;
}

EnvironmentConfig EnvironmentConfig::gradient(const Vec3 &zenith, const Vec3 &horizon) {
    EnvironmentConfig env;
    env.kind = Kind::gradient;
    env.zenith = zenith;
    env.horizon = horizon;
    return env;
}

Vec3 EnvironmentConfig::lookup(const Vec3 &d) const {
    if (kind == Kind::uniform) return radiance;
    return horizon + (zenith - horizon) * std::max(real(0), d.y);
}

// ---------------------------------------------------------------------------
// Material map

OpenPbrParams OpenPbrOverrides::apply(OpenPbrParams p) const {
    if (base_weight) p.base_weight = *base_weight;
    if (base_color) p.base_color = *base_color;
    if (base_metalness) p.base_metalness = *base_metalness;
    if (specular_weight) p.specular_weight = *specular_weight;
    if (specular_color) p.specular_color = *specular_color;
    if (specular_roughness) p.specular_roughness = *specular_roughness;
    if (specular_ior) p.specular_ior = *specular_ior;
    if (emission_luminance) p.emission_luminance = *emission_luminance;
    if (emission_color) p.emission_color = *emission_color;
    return p;
}

bool MaterialMapEntry::matches(const std::string &name) const {
    if (!pattern.empty() && pattern.back() == '*') {
        const std::string_view prefix(pattern.data(), pattern.size() - 1);
        return name.size() >= prefix.size() && name.compare(0, prefix.size(), prefix) == 0;
    }
    return name == pattern;
}

const MaterialMapEntry *MaterialMap::find(const std::string &name) const {
    for (const auto &e : entries) {
        if (e.matches(name)) return &e;
    }
    return nullptr;
}

namespace {

[[noreturn]] void config_error(const std::string &where, const std::string &what) {
    throw Error("render config: " + where + ": " + what);
}

real read_real(const json &j, const std::string &where) {
    if (!j.is_number()) config_error(where, "expected a number");
    return j.get<real>();
}

Vec3 read_vec3(const json &j, const std::string &where) {
    if (!j.is_array() || j.size() != 3) config_error(where, "expected an array of 3 numbers");
    return {read_real(j[0], where), read_real(j[1], where), read_real(j[2], where)};
}

void reject_unknown(const json &obj, std::initializer_list<const char *> allowed,
                    const std::string &where) {
    if (!obj.is_object()) config_error(where, "expected an object");
    for (const auto &item : obj.items()) {
        bool known = false;
        for (const char *k : allowed) known = known || item.key() == k;
        if (!known) config_error(where, "unknown key '" + item.key() + "'");
    }
}

OpenPbrOverrides read_overrides(const json &j, const std::string &where) {
    reject_unknown(j,
                   {"base_weight", "base_color", "base_metalness", "specular_weight",
                    "specular_color", "specular_roughness", "specular_ior",
                    "emission_luminance", "emission_color"},
                   where);
    OpenPbrOverrides o;
    auto scalar = [&](const char *key, std::optional<real> &dst) {
        if (j.contains(key)) dst = read_real(j[key], where + "." + key);
    };
    auto color = [&](const char *key, std::optional<Vec3> &dst) {
        if (j.contains(key)) dst = read_vec3(j[key], where + "." + key);
    };
    scalar("base_weight", o.base_weight);
    color("base_color", o.base_color);
    scalar("base_metalness", o.base_metalness);
    scalar("specular_weight", o.specular_weight);
    color("specular_color", o.specular_color);
    scalar("specular_roughness", o.specular_roughness);
    scalar("specular_ior", o.specular_ior);
    scalar("emission_luminance", o.emission_luminance);
    color("emission_color", o.emission_color);
    return o;
}

void check_params(const OpenPbrParams &p, const std::string &where) {
    const auto errors = validate_params(p);
    if (!errors.empty()) config_error(where, errors.front());
}

}  // namespace

RenderConfig parse_render_config(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw Error(std::string("render config: malformed JSON: ") + e.what());
    }
    reject_unknown(doc, {"camera", "environment", "materials"}, "document");
    RenderConfig config;

    if (doc.contains("camera")) {
        const json &c = doc["camera"];
        reject_unknown(c, {"position", "look_at", "up", "vertical_fov", "width", "height"},
                       "camera");
        CameraConfig cam;
        if (c.contains("position")) cam.position = read_vec3(c["position"], "camera.position");
        if (c.contains("look_at")) cam.look_at = read_vec3(c["look_at"], "camera.look_at");
        if (c.contains("up")) cam.up = read_vec3(c["up"], "camera.up");
        if (c.contains("vertical_fov"))
            cam.vertical_fov = read_real(c["vertical_fov"], "camera.vertical_fov");
        if (c.contains("width")) cam.width = static_cast<int>(read_real(c["width"], "camera.width"));
        if (c.contains("height"))
            cam.height = static_cast<int>(read_real(c["height"], "camera.height"));
        const auto errors = validate_camera(cam);
        if (!errors.empty()) config_error("camera", errors.front());
        config.camera = cam;
    }

    if (doc.contains("environment")) {
        const json &e = doc["environment"];
        if (!e.is_object() || !e.contains("type") || !e["type"].is_string())
            config_error("environment", "expected an object with a string 'type'");
        const std::string type = e["type"];
        auto non_negative = [](const Vec3 &v, const char *where) {
            if (!is_finite(v) || min_component(v) < 0)
                config_error(where, "radiance must be finite and >= 0");
            return v;
        };
        if (type == "uniform") {
            reject_unknown(e, {"type", "radiance"}, "environment");
            config.environment = EnvironmentConfig::uniform(
                e.contains("radiance")
                    ? non_negative(read_vec3(e["radiance"], "environment.radiance"),
                                   "environment.radiance")
                    : Vec3{1});
        } else if (type == "gradient") {
            reject_unknown(e, {"type", "zenith", "horizon"}, "environment");
            if (!e.contains("zenith") || !e.contains("horizon"))
                config_error("environment", "gradient needs 'zenith' and 'horizon'");
            config.environment = EnvironmentConfig::gradient(
                non_negative(read_vec3(e["zenith"], "environment.zenith"), "environment.zenith"),
                non_negative(read_vec3(e["horizon"], "environment.horizon"),
                             "environment.horizon"));
        } else {
            config_error("environment.type", "unknown environment type '" + type + "'");
        }
    }

    if (doc.contains("materials")) {
        const json &m = doc["materials"];
        reject_unknown(m, {"default", "entries"}, "materials");
        if (m.contains("default")) {
            config.materials.default_params =
                read_overrides(m["default"], "materials.default").apply(OpenPbrParams{});
            check_params(config.materials.default_params, "materials.default");
        }
        if (m.contains("entries")) {
            if (!m["entries"].is_array()) config_error("materials.entries", "expected an array");
            std::size_t index = 0;
            for (const json &entry : m["entries"]) {
                const std::string where = "materials.entries[" + std::to_string(index++) + "]";
                reject_unknown(entry, {"match", "params"}, where);
                if (!entry.contains("match") || !entry["match"].is_string())
                    config_error(where, "missing string 'match'");
                MaterialMapEntry e;
                e.pattern = entry["match"].get<std::string>();
                const auto star = e.pattern.find('*');
                if (e.pattern.empty() ||
                    (star != std::string::npos && star != e.pattern.size() - 1)) {
                    config_error(where + ".match",
                                 "pattern must be an exact name or end in a single '*'");
                }
                if (entry.contains("params"))
                    e.overrides = read_overrides(entry["params"], where + ".params");
                check_params(e.overrides.apply(config.materials.default_params), where + ".params");
                config.materials.entries.push_back(std::move(e));
            }
        }
    }
    return config;
}

namespace {

std::string read_text_file(const std::filesystem::path &path, const char *what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(std::string("cannot open ") + what + " '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path &path, const char *what) {
    const std::string text = read_text_file(path, what);
    return {text.begin(), text.end()};
}

}  // namespace

RenderConfig load_render_config(const std::filesystem::path &path) {
    return parse_render_config(read_text_file(path, "render config"));
}

// ---------------------------------------------------------------------------
// Transforms

Mat4 mat4_identity() { return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1}; }

Mat4 mat4_multiply(const Mat4 &a, const Mat4 &b) {
    Mat4 r{};
    for (int col = 0; col < 4; ++col)
        for (int row = 0; row < 4; ++row) {
            real s = 0;
            for (int k = 0; k < 4; ++k) s += a[k * 4 + row] * b[col * 4 + k];
            r[col * 4 + row] = s;
        }
    return r;
}

Mat4 mat4_from_trs(const Vec3 &t, const std::array<real, 4> &q, const Vec3 &s) {
    const real x = q[0], y = q[1], z = q[2], w = q[3];
    // Rotation columns scaled by s, translation in the last column.
    return {(1 - 2 * (y * y + z * z)) * s.x,
            (2 * (x * y + z * w)) * s.x,
            (2 * (x * z - y * w)) * s.x,
            0,
            (2 * (x * y - z * w)) * s.y,
            (1 - 2 * (x * x + z * z)) * s.y,
            (2 * (y * z + x * w)) * s.y,
            0,
            (2 * (x * z + y * w)) * s.z,
            (2 * (y * z - x * w)) * s.z,
            (1 - 2 * (x * x + y * y)) * s.z,
            0,
            t.x,
            t.y,
            t.z,
            1};
}

Vec3 transform_point(const Mat4 &m, const Vec3 &p) {
    return {m[0] * p.x + m[4] * p.y + m[8] * p.z + m[12],
            m[1] * p.x + m[5] * p.y + m[9] * p.z + m[13],
            m[2] * p.x + m[6] * p.y + m[10] * p.z + m[14]};
}

Vec3 transform_normal(const Mat4 &m, const Vec3 &n) {
    // Cofactor matrix = det * inverse-transpose; the scale drops out after
    // normalization, apart from the sign.
    const Vec3 c0{m[0], m[1], m[2]}, c1{m[4], m[5], m[6]}, c2{m[8], m[9], m[10]};
    const Vec3 r0 = cross(c1, c2), r1 = cross(c2, c0), r2 = cross(c0, c1);
    const real det = dot(c0, r0);
    Vec3 out = r0 * n.x + r1 * n.y + r2 * n.z;
    if (det < 0) out = -out;
    const real len = length(out);
    return len > 0 ? out / len : out;
}

// ---------------------------------------------------------------------------
// glTF

namespace {

constexpr std::uint32_t kGlbMagic = 0x46546C67;
constexpr std::uint32_t kGlbJsonChunk = 0x4E4F534A;
constexpr std::uint32_t kGlbBinChunk = 0x004E4942;

[[noreturn]] void gltf_error(const std::string &what) { throw Error("glTF: " + what); }

std::vector<std::uint8_t> decode_base64(std::string_view in, const std::string &where) {
    auto value = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+' || c == '-') return 62;
        if (c == '/' || c == '_') return 63;
        return -1;
    };
    std::vector<std::uint8_t> out;
    out.reserve(in.size() * 3 / 4);
    std::uint32_t acc = 0;
    int bits = 0;
    for (char c : in) {
        if (c == '=') break;
        if (c == '\n' || c == '\r' || c == ' ') continue;
        const int v = value(c);
        if (v < 0) gltf_error(where + ": invalid base64 data");
        acc = (acc << 6) | static_cast<std::uint32_t>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xFF));
        }
    }
    return out;
}

const json &require(const json &obj, const char *key, const std::string &where) {
    if (!obj.is_object() || !obj.contains(key)) gltf_error(where + ": missing '" + key + "'");
    return obj[key];
}

std::size_t require_index(const json &j, std::size_t limit, const std::string &where) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0 ||
        static_cast<std::size_t>(j.get<std::int64_t>()) >= limit) {
        gltf_error(where + ": index out of range");
    }
    return static_cast<std::size_t>(j.get<std::int64_t>());
}

real number_or(const json &obj, const char *key, real fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) gltf_error(std::string("'") + key + "' must be a number");
    return obj[key].get<real>();
}

class AccessorReader {
  public:
    AccessorReader(const json &doc, std::vector<std::vector<std::uint8_t>> buffers)
        : doc_(doc), buffers_(std::move(buffers)) {}

    std::vector<Vec3> read_vec3(std::size_t accessor, const std::string &where) const {
        const View v = view(accessor, "VEC3", where);
        if (v.component_type != 5126) gltf_error(where + ": expected FLOAT components");
        std::vector<Vec3> out(v.count);
        for (std::size_t i = 0; i < v.count; ++i) {
            float f[3];
            std::memcpy(f, v.data + i * v.stride, sizeof f);
            out[i] = {f[0], f[1], f[2]};
        }
        return out;
    }

    std::vector<std::uint32_t> read_indices(std::size_t accessor, const std::string &where) const {
        const View v = view(accessor, "SCALAR", where);
        std::vector<std::uint32_t> out(v.count);
        for (std::size_t i = 0; i < v.count; ++i) {
            const std::uint8_t *p = v.data + i * v.stride;
            switch (v.component_type) {
            case 5121: out[i] = *p; break;
            case 5123: {
                std::uint16_t x;
                std::memcpy(&x, p, 2);
                out[i] = x;
                break;
            }
            case 5125: std::memcpy(&out[i], p, 4); break;
            default: gltf_error(where + ": unsupported index component type " +
                                std::to_string(v.component_type));
            }
        }
        return out;
    }

  private:
    struct View {
        const std::uint8_t *data;
        std::size_t count, stride;
        int component_type;
    };

    View view(std::size_t index, const char *expected_type, const std::string &where) const {
        const json &accessors = require(doc_, "accessors", "document");
        const std::string at = where + " (accessor " + std::to_string(index) + ")";
        if (index >= accessors.size()) gltf_error(at + ": accessor does not exist");
        const json &a = accessors[index];
        if (a.contains("sparse")) gltf_error(at + ": sparse accessors are not supported");
        const std::string type = require(a, "type", at);
        if (type != expected_type)
            gltf_error(at + ": expected type " + expected_type + ", got " + type);
        const int component_type = require(a, "componentType", at).get<int>();
        const auto count = require(a, "count", at).get<std::size_t>();
        const std::size_t comp_size =
            component_type == 5121 ? 1 : component_type == 5123 ? 2 : 4;
        const std::size_t elem_size = comp_size * (type == "VEC3" ? 3 : 1);
        if (!a.contains("bufferView")) {
            gltf_error(at + ": accessors without a bufferView are not supported");
        }
        const json &views = require(doc_, "bufferViews", "document");
        const std::size_t vi = require_index(a["bufferView"], views.size(), at + ".bufferView");
        const json &bv = views[vi];
        const std::size_t buffer =
            require_index(require(bv, "buffer", at), buffers_.size(), at + " bufferView.buffer");
        const auto view_offset = bv.value("byteOffset", std::size_t{0});
        const auto view_length = require(bv, "byteLength", at).get<std::size_t>();
        const auto stride = bv.value("byteStride", elem_size);
        const auto offset = a.value("byteOffset", std::size_t{0});
        const auto &bytes = buffers_[buffer];
        if (view_offset + view_length > bytes.size())
            gltf_error(at + ": bufferView exceeds buffer " + std::to_string(buffer));
        if (count > 0 && offset + stride * (count - 1) + elem_size > view_length)
            gltf_error(at + ": accessor exceeds its bufferView");
        return {bytes.data() + view_offset + offset, count, stride, component_type};
    }

    const json &doc_;
    std::vector<std::vector<std::uint8_t>> buffers_;
};

std::vector<Vec3> generate_normals(const std::vector<Vec3> &pos,
                                   const std::vector<std::uint32_t> &idx) {
    std::vector<Vec3> normals(pos.size(), Vec3{});
    for (std::size_t i = 0; i + 2 < idx.size(); i += 3) {
        const Vec3 &a = pos[idx[i]], &b = pos[idx[i + 1]], &c = pos[idx[i + 2]];
        // Unnormalized cross product: area weighting.
        const Vec3 face = cross(b - a, c - a);
        for (int k = 0; k < 3; ++k) normals[idx[i + k]] += face;
    }
    for (Vec3 &n : normals) {
        const real len = length(n);
        n = len > 0 ? n / len : Vec3{0, 0, 1};
    }
    return normals;
}

Mat4 node_matrix(const json &node, const std::string &where) {
    if (node.contains("matrix")) {
        const json &m = node["matrix"];
        if (!m.is_array() || m.size() != 16) gltf_error(where + ": matrix must have 16 numbers");
        Mat4 out;
        for (int i = 0; i < 16; ++i) out[i] = m[i].get<real>();
        return out;
    }
    Vec3 t{0}, s{1};
    std::array<real, 4> q{0, 0, 0, 1};
    auto vec = [&](const char *key, std::size_t n, real *dst) {
        if (!node.contains(key)) return;
        const json &v = node[key];
        if (!v.is_array() || v.size() != n)
            gltf_error(where + ": '" + key + "' must have " + std::to_string(n) + " numbers");
        for (std::size_t i = 0; i < n; ++i) dst[i] = v[i].get<real>();
    };
    real tv[3] = {0, 0, 0}, sv[3] = {1, 1, 1};
    vec("translation", 3, tv);
    vec("rotation", 4, q.data());
    vec("scale", 3, sv);
    t = {tv[0], tv[1], tv[2]};
    s = {sv[0], sv[1], sv[2]};
    return mat4_from_trs(t, q, s);
}

}  // namespace

GltfDocument parse_gltf(const std::string &text, const std::filesystem::path &base_dir,
                        const std::vector<std::uint8_t> *glb_bin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        gltf_error(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) gltf_error("document is not a JSON object");
    if (doc.contains("asset") && doc["asset"].contains("version")) {
        const std::string version = doc["asset"]["version"].get<std::string>();
        if (version.rfind("2.", 0) != 0) gltf_error("unsupported asset version " + version);
    }

    std::vector<std::vector<std::uint8_t>> buffers;
    if (doc.contains("buffers")) {
        std::size_t i = 0;
        for (const json &b : doc["buffers"]) {
            const std::string where = "buffer " + std::to_string(i);
            if (!b.contains("uri")) {
                if (i != 0 || !glb_bin) gltf_error(where + ": no uri and no GLB binary chunk");
                buffers.push_back(*glb_bin);
            } else {
                const std::string uri = b["uri"];
                if (uri.rfind("data:", 0) == 0) {
                    const auto comma = uri.find(";base64,");
                    if (comma == std::string::npos)
                        gltf_error(where + ": only base64 data URIs are supported");
                    buffers.push_back(
                        decode_base64(std::string_view(uri).substr(comma + 8), where));
                } else {
                    buffers.push_back(read_binary_file(base_dir / uri, "glTF buffer"));
                }
            }
            const auto declared = require(b, "byteLength", where).get<std::size_t>();
            if (buffers.back().size() < declared)
                gltf_error(where + ": holds " + std::to_string(buffers.back().size()) +
                           " bytes, byteLength says " + std::to_string(declared));
            ++i;
        }
    }
    const AccessorReader reader(doc, std::move(buffers));

    GltfDocument out;
    if (doc.contains("materials")) {
        for (const json &m : doc["materials"]) {
            GltfMaterial mat;
            mat.name = m.value("name", std::string{});
            if (m.contains("pbrMetallicRoughness")) {
                const json &pbr = m["pbrMetallicRoughness"];
                if (pbr.contains("baseColorFactor")) {
                    const json &c = pbr["baseColorFactor"];
                    mat.base_color = Vec3{c.at(0).get<real>(), c.at(1).get<real>(),
                                          c.at(2).get<real>()};
                }
                if (pbr.contains("metallicFactor")) mat.metallic = pbr["metallicFactor"].get<real>();
                if (pbr.contains("roughnessFactor"))
                    mat.roughness = pbr["roughnessFactor"].get<real>();
            }
            if (m.contains("emissiveFactor")) {
                const json &e = m["emissiveFactor"];
                mat.emissive = Vec3{e.at(0).get<real>(), e.at(1).get<real>(), e.at(2).get<real>()};
            }
            if (m.contains("extensions") && m["extensions"].contains("KHR_materials_emissive_strength")) {
                mat.emissive_strength = number_or(
                    m["extensions"]["KHR_materials_emissive_strength"], "emissiveStrength", 1);
            }
            out.materials.push_back(std::move(mat));
        }
    }

    if (doc.contains("meshes")) {
        std::size_t mi = 0;
        for (const json &m : doc["meshes"]) {
            GltfMesh mesh;
            mesh.name = m.value("name", std::string{});
            const std::string mesh_where =
                "mesh " + std::to_string(mi) + (mesh.name.empty() ? "" : " ('" + mesh.name + "')");
            std::size_t pi = 0;
            for (const json &p : require(m, "primitives", mesh_where)) {
                const std::string where = mesh_where + " primitive " + std::to_string(pi++);
                const int mode = p.value("mode", 4);
                if (mode != 4) {
                    gltf_error(where + ": unsupported primitive mode " + std::to_string(mode) +
                               " (only triangles, mode 4, are supported)");
                }
                const json &attrs = require(p, "attributes", where);
                GltfPrimitive prim;
                prim.positions = reader.read_vec3(
                    require(attrs, "POSITION", where).get<std::size_t>(), where + " POSITION");
                if (p.contains("indices")) {
                    prim.indices = reader.read_indices(p["indices"].get<std::size_t>(),
                                                       where + " indices");
                } else {
                    prim.indices.resize(prim.positions.size());
                    for (std::size_t i = 0; i < prim.indices.size(); ++i)
                        prim.indices[i] = static_cast<std::uint32_t>(i);
                }
                if (prim.indices.size() % 3 != 0)
                    gltf_error(where + ": index count is not a multiple of 3");
                for (std::uint32_t idx : prim.indices) {
                    if (idx >= prim.positions.size())
                        gltf_error(where + ": index " + std::to_string(idx) + " out of range");
                }
                if (attrs.contains("NORMAL")) {
                    prim.normals =
                        reader.read_vec3(attrs["NORMAL"].get<std::size_t>(), where + " NORMAL");
                    if (prim.normals.size() != prim.positions.size())
                        gltf_error(where + ": NORMAL count differs from POSITION count");
                    for (Vec3 &n : prim.normals) {
                        const real len = length(n);
                        if (len > 0) n /= len;
                    }
                } else {
                    prim.normals = generate_normals(prim.positions, prim.indices);
                    prim.normals_generated = true;
                }
                if (p.contains("material")) {
                    prim.material =
                        require_index(p["material"], out.materials.size(), where + " material");
                }
                mesh.primitives.push_back(std::move(prim));
            }
            out.meshes.push_back(std::move(mesh));
            ++mi;
        }
    }

    if (doc.contains("nodes")) {
        const std::size_t count = doc["nodes"].size();
        std::vector<char> is_child(count, 0);
        std::size_t ni = 0;
        for (const json &n : doc["nodes"]) {
            const std::string where = "node " + std::to_string(ni);
            GltfNode node;
            node.name = n.value("name", std::string{});
            if (n.contains("mesh"))
                node.mesh = require_index(n["mesh"], out.meshes.size(), where + " mesh");
            if (n.contains("children")) {
                for (const json &c : n["children"]) {
                    const std::size_t child = require_index(c, count, where + " children");
                    node.children.push_back(child);
                    is_child[child] = 1;
                }
            }
            node.local = node_matrix(n, where);
            out.nodes.push_back(std::move(node));
            ++ni;
        }
        if (doc.contains("scenes") && !doc["scenes"].empty()) {
            const std::size_t scene =
                doc.contains("scene") ? require_index(doc["scene"], doc["scenes"].size(), "scene")
                                      : 0;
            const json &s = doc["scenes"][scene];
            if (s.contains("nodes")) {
                for (const json &r : s["nodes"])
                    out.root_nodes.push_back(require_index(r, count, "scene nodes"));
            }
        } else {
            for (std::size_t i = 0; i < count; ++i)
                if (!is_child[i]) out.root_nodes.push_back(i);
        }
    }
    return out;
}

GltfDocument load_gltf(const std::filesystem::path &path) {
    if (!std::filesystem::exists(path)) gltf_error("file not found: '" + path.string() + "'");
    const auto bytes = read_binary_file(path, "glTF file");
    const auto base_dir = path.parent_path();

    auto u32_at = [&](std::size_t off) {
        std::uint32_t v;
        std::memcpy(&v, bytes.data() + off, 4);
        return v;
    };
    if (bytes.size() >= 4 && u32_at(0) == kGlbMagic) {
        const std::string where = "GLB '" + path.string() + "'";
        if (bytes.size() < 20) gltf_error(where + ": truncated header");
        if (u32_at(4) != 2) gltf_error(where + ": unsupported container version");
        const std::size_t total = u32_at(8);
        if (total > bytes.size()) gltf_error(where + ": declared length exceeds file size");
        std::size_t off = 12;
        std::string json_text;
        std::optional<std::vector<std::uint8_t>> bin;
        while (off + 8 <= total) {
            const std::size_t len = u32_at(off);
            const std::uint32_t type = u32_at(off + 4);
            if (off + 8 + len > total) gltf_error(where + ": chunk exceeds file size");
            const auto *data = bytes.data() + off + 8;
            if (type == kGlbJsonChunk && json_text.empty()) {
                json_text.assign(reinterpret_cast<const char *>(data), len);
            } else if (type == kGlbBinChunk && !bin) {
                bin.emplace(data, data + len);
            }
            off += 8 + len;
        }
        if (json_text.empty()) gltf_error(where + ": missing JSON chunk");
        return parse_gltf(json_text, base_dir, bin ? &*bin : nullptr);
    }
    return parse_gltf(std::string(bytes.begin(), bytes.end()), base_dir, nullptr);
}

// ---------------------------------------------------------------------------
// Flattening

Aabb SceneDescription::bounds() const {
    Aabb box;
    for (const Triangle &t : triangles) {
        box.expand(t.v0);
        box.expand(t.v1);
        box.expand(t.v2);
    }
    return box;
}

OpenPbrParams resolve_material(const GltfMaterial &gltf, const MaterialMap &map) {
    if (const MaterialMapEntry *entry = map.find(gltf.name)) {
        return entry->overrides.apply(map.default_params);
    }
    OpenPbrOverrides fallback;
    auto unit = [](real v) { return std::clamp(v, real(0), real(1)); };
    if (gltf.base_color) {
        const Vec3 &c = *gltf.base_color;
        fallback.base_color = Vec3{unit(c.x), unit(c.y), unit(c.z)};
    }
    if (gltf.metallic) fallback.base_metalness = unit(*gltf.metallic);
    if (gltf.roughness) fallback.specular_roughness = unit(*gltf.roughness);
    if (gltf.emissive && max_component(*gltf.emissive) > 0) {
        const real peak = max_component(*gltf.emissive);
        fallback.emission_color = *gltf.emissive / peak;
        fallback.emission_luminance = peak * std::max(real(0), gltf.emissive_strength);
    }
    return fallback.apply(map.default_params);
}

SceneDescription flatten_scene(const GltfDocument &graph, const MaterialMap &material_map,
                               const CameraConfig &camera, const EnvironmentConfig &env) {
    SceneDescription scene;
    scene.camera = camera;
    scene.environment = env;
    for (const GltfMaterial &m : graph.materials)
        scene.materials.push_back(resolve_material(m, material_map));
    const auto default_slot = static_cast<std::uint32_t>(scene.materials.size());
    scene.materials.push_back(material_map.default_params);

    std::vector<Triangle> all;
    std::function<void(std::size_t, const Mat4 &, std::size_t)> visit =
        [&](std::size_t index, const Mat4 &parent, std::size_t depth) {
            if (depth > graph.nodes.size())
                gltf_error("node hierarchy contains a cycle at node " + std::to_string(index));
            const GltfNode &node = graph.nodes[index];
            const Mat4 world = mat4_multiply(parent, node.local);
            if (node.mesh) {
                for (const GltfPrimitive &prim : graph.meshes[*node.mesh].primitives) {
                    const std::uint32_t material =
                        prim.material ? static_cast<std::uint32_t>(*prim.material) : default_slot;
                    for (std::size_t i = 0; i + 2 < prim.indices.size(); i += 3) {
                        Triangle tri;
                        const std::uint32_t a = prim.indices[i], b = prim.indices[i + 1],
                                            c = prim.indices[i + 2];
                        tri.v0 = transform_point(world, prim.positions[a]);
                        tri.v1 = transform_point(world, prim.positions[b]);
                        tri.v2 = transform_point(world, prim.positions[c]);
                        tri.n0 = transform_normal(world, prim.normals[a]);
                        tri.n1 = transform_normal(world, prim.normals[b]);
                        tri.n2 = transform_normal(world, prim.normals[c]);
                        tri.material_index = material;
                        all.push_back(tri);
                    }
                }
            }
            for (std::size_t child : node.children) visit(child, world, depth + 1);
        };
    for (std::size_t root : graph.root_nodes) visit(root, mat4_identity(), 0);

    Aabb box;
    for (const Triangle &t : all) {
        box.expand(t.v0);
        box.expand(t.v1);
        box.expand(t.v2);
    }
    const real extent = max_component(box.extent());
    const real min_area = 1e-12 * extent * extent;
    scene.triangles.reserve(all.size());
    for (Triangle &t : all) {
        const Vec3 face = cross(t.v1 - t.v0, t.v2 - t.v0);
        const real area = real(0.5) * length(face);
        if (!(area >= min_area) || area == 0) {
            ++scene.dropped_degenerate;
            continue;
        }
        const Vec3 fallback = face / (2 * area);
        for (Vec3 *n : {&t.n0, &t.n1, &t.n2}) {
            if (!is_finite(*n) || std::abs(length(*n) - 1) > 1e-6) *n = fallback;
        }
        scene.triangles.push_back(t);
    }
    if (scene.triangles.empty()) throw EmptySceneError();
    return scene;
}

CameraConfig frame_bounds(const Aabb &bounds, int width, int height, real vertical_fov) {
    CameraConfig cam;
    cam.width = width;
    cam.height = height;
    cam.vertical_fov = vertical_fov;
    const Vec3 center = bounds.centroid();
    const real radius = std::max(real(1e-6), real(0.5) * length(bounds.extent()));
    const real half = vertical_fov * kPi / 360;
    const real distance = 1.1 * radius / std::sin(half);
    cam.look_at = center;
    cam.position = center + distance * normalize(Vec3{0.35, 0.45, 1});
    cam.up = {0, 1, 0};
    return cam;
}

}  // namespace glint
