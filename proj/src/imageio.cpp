#include "softglcm/imageio.hpp"

#include "softglcm/error.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

namespace softglcm {

namespace {

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failure on '" + path.string() + "'");
    return bytes;
}

std::string describe_magic(std::span<const unsigned char> bytes) {
    std::ostringstream os;
    os << "magic bytes";
    const std::size_t n = std::min<std::size_t>(bytes.size(), 4);
    if (n == 0) return "empty file";
    for (std::size_t i = 0; i < n; ++i) {
        char buf[8];
        std::snprintf(buf, sizeof buf, " %02x", bytes[i]);
        os << buf;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// PGM

class PgmHeaderReader {
public:
    PgmHeaderReader(std::span<const unsigned char> bytes, const std::string& name)
        : bytes_(bytes), name_(name) {}

    std::uint32_t next_uint() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
            throw IoError("'" + name_ + "': truncated or malformed PGM header");
        }
        std::uint64_t v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > 0xFFFFFFFFull) throw FormatError("'" + name_ + "': PGM value overflow");
            ++pos_;
        }
        return static_cast<std::uint32_t>(v);
    }

    std::size_t pos() const { return pos_; }
    void set_pos(std::size_t p) { pos_ = p; }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const unsigned char> bytes_;
    std::string name_;
    std::size_t pos_ = 2;
};

DecodedImage decode_pgm(std::span<const unsigned char> bytes, const std::string& name) {
    const bool binary = bytes[1] == '5';
    PgmHeaderReader reader(bytes, name);
    const std::uint32_t width = reader.next_uint();
    const std::uint32_t height = reader.next_uint();
    const std::uint32_t maxval = reader.next_uint();
    if (width == 0 || height == 0) throw FormatError("'" + name + "': zero PGM dimension");
    if (maxval == 0 || maxval > 65535) {
        throw FormatError("'" + name + "': PGM maxval " + std::to_string(maxval) +
                          " outside 1..65535");
    }
    const std::size_t count = static_cast<std::size_t>(width) * height;
    DecodedImage out;
    out.depth = maxval + 1;
    out.raw.width = static_cast<int>(width);
    out.raw.height = static_cast<int>(height);
    out.raw.values.resize(count);

    if (binary) {
        // Exactly one whitespace byte separates the header from the raster.
        std::size_t pos = reader.pos();
        if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
            throw IoError("'" + name + "': truncated PGM header");
        }
        ++pos;
        const std::size_t bpp = maxval < 256 ? 1 : 2;
        if (bytes.size() - pos < count * bpp) {
            throw IoError("'" + name + "': truncated P5 payload (" +
                          std::to_string(bytes.size() - pos) + " of " +
                          std::to_string(count * bpp) + " bytes)");
        }
        for (std::size_t i = 0; i < count; ++i) {
            std::uint32_t v = bytes[pos + i * bpp];
            if (bpp == 2) v = (v << 8) | bytes[pos + i * bpp + 1];
            out.raw.values[i] = v;
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) out.raw.values[i] = reader.next_uint();
    }
    for (std::size_t i = 0; i < count; ++i) {
        if (out.raw.values[i] > maxval) {
            throw FormatError("'" + name + "': sample " + std::to_string(out.raw.values[i]) +
                              " exceeds maxval at (" + std::to_string(i / width) + ", " +
                              std::to_string(i % width) + ")");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// PNG (8-bit grayscale, non-interlaced)

constexpr std::array<unsigned char, 8> kPngSignature = {0x89, 'P', 'N', 'G',
                                                        '\r', '\n', 0x1a, '\n'};

std::uint32_t be32(const unsigned char* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

unsigned char paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a);
    const int pb = std::abs(p - b);
    const int pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return static_cast<unsigned char>(a);
    if (pb <= pc) return static_cast<unsigned char>(b);
    return static_cast<unsigned char>(c);
}

DecodedImage decode_png(std::span<const unsigned char> bytes, const std::string& name) {
    std::size_t pos = kPngSignature.size();
    std::uint32_t width = 0, height = 0;
    bool have_header = false;
    bool have_end = false;
    std::vector<unsigned char> compressed;

    while (!have_end) {
        if (bytes.size() - pos < 12) throw IoError("'" + name + "': truncated PNG chunk");
        const std::uint32_t length = be32(&bytes[pos]);
        const unsigned char* type = &bytes[pos + 4];
        if (bytes.size() - pos - 12 < length) {
            throw IoError("'" + name + "': truncated PNG chunk data");
        }
        const unsigned char* data = &bytes[pos + 8];
        const std::uint32_t stored_crc = be32(data + length);
        const auto crc = static_cast<std::uint32_t>(
            crc32(crc32(0L, type, 4), data, static_cast<uInt>(length)));
        if (crc != stored_crc) throw FormatError("'" + name + "': PNG chunk CRC mismatch");

        const std::string tag(reinterpret_cast<const char*>(type), 4);
        if (tag == "IHDR") {
            if (length != 13) throw FormatError("'" + name + "': bad IHDR length");
            width = be32(data);
            height = be32(data + 4);
            const int bit_depth = data[8];
            const int color_type = data[9];
            const int interlace = data[12];
            if (color_type != 0) {
                throw FormatError("'" + name + "': PNG color type " +
                                  std::to_string(color_type) +
                                  " unsupported (only 8-bit grayscale)");
            }
            if (bit_depth != 8) {
                throw FormatError("'" + name + "': PNG bit depth " +
                                  std::to_string(bit_depth) + " unsupported (only 8)");
            }
            if (interlace != 0) throw FormatError("'" + name + "': interlaced PNG unsupported");
            if (data[10] != 0 || data[11] != 0) {
                throw FormatError("'" + name + "': unknown PNG compression/filter method");
            }
            if (width == 0 || height == 0) throw FormatError("'" + name + "': zero PNG dimension");
            have_header = true;
        } else if (tag == "IDAT") {
            compressed.insert(compressed.end(), data, data + length);
        } else if (tag == "IEND") {
            have_end = true;
        } else if (!(type[0] & 0x20)) {
            throw FormatError("'" + name + "': unknown critical PNG chunk " + tag);
        }
        pos += 12 + length;
    }
    if (!have_header) throw FormatError("'" + name + "': PNG without IHDR");

    const std::size_t stride = width;
    std::vector<unsigned char> raw((stride + 1) * height);
    uLongf raw_len = static_cast<uLongf>(raw.size());
    const int rc = uncompress(raw.data(), &raw_len, compressed.data(),
                              static_cast<uLong>(compressed.size()));
    if (rc != Z_OK || raw_len != raw.size()) {
        throw IoError("'" + name + "': corrupt or truncated PNG image data");
    }

    DecodedImage out;
    out.depth = 256;
    out.raw.width = static_cast<int>(width);
    out.raw.height = static_cast<int>(height);
    out.raw.values.resize(stride * height);
    std::vector<unsigned char> prev(stride, 0), cur(stride);
    for (std::uint32_t y = 0; y < height; ++y) {
        const unsigned char filter = raw[y * (stride + 1)];
        const unsigned char* src = &raw[y * (stride + 1) + 1];
        for (std::size_t x = 0; x < stride; ++x) {
            const int a = x > 0 ? cur[x - 1] : 0;
            const int b = prev[x];
            const int c = x > 0 ? prev[x - 1] : 0;
            int v = src[x];
            switch (filter) {
                case 0: break;
                case 1: v += a; break;
                case 2: v += b; break;
                case 3: v += (a + b) / 2; break;
                case 4: v += paeth(a, b, c); break;
                default:
                    throw FormatError("'" + name + "': PNG filter type " +
                                      std::to_string(filter) + " invalid");
            }
            cur[x] = static_cast<unsigned char>(v & 0xFF);
        }
        std::copy(cur.begin(), cur.end(), out.raw.values.begin() + y * stride);
        std::swap(prev, cur);
    }
    return out;
}

// Mirror index about the edge pixels (…c b | a b c | b a…); period 2(n-1).
int reflect_index(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * (n - 1);
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - i;
}

}  // namespace

DecodedImage decode_gray(const std::filesystem::path& path) {
    const auto bytes = read_all(path);
    const std::string name = path.string();
    if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5')) {
        return decode_pgm(bytes, name);
    }
    if (bytes.size() >= kPngSignature.size() &&
        std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin())) {
        return decode_png(bytes, name);
    }
    throw FormatError("'" + name + "': unsupported format (" + describe_magic(bytes) + ")");
}

GrayImage load_gray(const std::filesystem::path& path) {
    const DecodedImage decoded = decode_gray(path);
    return normalize_image(decoded.raw, decoded.depth);
}

void save_pgm(const std::filesystem::path& path, const RawGrid& raw, std::uint32_t depth) {
    if (depth < 2 || depth > 65536) throw ContractError("save_pgm: depth must be in 2..65536");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << "P5\n" << raw.width << ' ' << raw.height << '\n' << (depth - 1) << '\n';
    std::vector<char> payload;
    const bool wide = depth > 256;
    payload.reserve(raw.values.size() * (wide ? 2 : 1));
    for (std::uint32_t v : raw.values) {
        if (wide) payload.push_back(static_cast<char>((v >> 8) & 0xFF));
        payload.push_back(static_cast<char>(v & 0xFF));
    }
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw IoError("write failure on '" + path.string() + "'");
}

void save_pgm(const std::filesystem::path& path, const GrayImage& img, std::uint32_t depth) {
    save_pgm(path, denormalize_image(img, depth), depth);
}

PatchSet extract_patches(const GrayImage& img, int patch_size, PadPolicy policy) {
    if (patch_size < 2) {
        throw GeometryError("extract_patches: patch size must be >= 2, got " +
                            std::to_string(patch_size));
    }
    const int h = img.height();
    const int w = img.width();
    const int pad_h = (patch_size - h % patch_size) % patch_size;
    const int pad_w = (patch_size - w % patch_size) % patch_size;
    if (policy == PadPolicy::Reject && (pad_h != 0 || pad_w != 0)) {
        throw GeometryError("extract_patches: " + std::to_string(h) + "x" + std::to_string(w) +
                            " is not a multiple of patch size " + std::to_string(patch_size) +
                            "; needs padding of " + std::to_string(pad_h) + " rows and " +
                            std::to_string(pad_w) + " columns");
    }

    PatchSet out;
    out.grid = {patch_size, (h + pad_h) / patch_size, (w + pad_w) / patch_size, h, w};
    out.patches.reserve(out.grid.patch_count());
    for (int gr = 0; gr < out.grid.rows; ++gr) {
        for (int gc = 0; gc < out.grid.cols; ++gc) {
            PatchRef p{gr, gc, patch_size, {}};
            p.pixels.resize(static_cast<std::size_t>(patch_size) * patch_size);
            for (int r = 0; r < patch_size; ++r) {
                const int src_r = reflect_index(gr * patch_size + r, h);
                for (int c = 0; c < patch_size; ++c) {
                    const int src_c = reflect_index(gc * patch_size + c, w);
                    p.pixels[static_cast<std::size_t>(r) * patch_size + c] = img.at(src_r, src_c);
                }
            }
            out.patches.push_back(std::move(p));
        }
    }
    return out;
}

GrayImage assemble_patches(std::span<const PatchRef> patches, const PatchGrid& grid) {
    if (grid.patch_size < 1 || grid.rows < 1 || grid.cols < 1) {
        throw GeometryError("assemble_patches: empty grid");
    }
    std::vector<int> seen(static_cast<std::size_t>(grid.patch_count()), 0);
    std::string problems;
    for (const auto& p : patches) {
        if (p.grid_row < 0 || p.grid_row >= grid.rows || p.grid_col < 0 ||
            p.grid_col >= grid.cols) {
            problems += " outside(" + std::to_string(p.grid_row) + ", " +
                        std::to_string(p.grid_col) + ")";
            continue;
        }
        if (p.patch_size != grid.patch_size ||
            p.pixels.size() != static_cast<std::size_t>(grid.patch_size) * grid.patch_size) {
            throw ContractError("assemble_patches: patch (" + std::to_string(p.grid_row) +
                                ", " + std::to_string(p.grid_col) +
                                ") has the wrong size for this grid");
        }
        ++seen[static_cast<std::size_t>(p.grid_row) * grid.cols + p.grid_col];
    }
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            const int n = seen[static_cast<std::size_t>(r) * grid.cols + c];
            if (n == 0) {
                problems += " missing(" + std::to_string(r) + ", " + std::to_string(c) + ")";
            } else if (n > 1) {
                problems += " duplicate(" + std::to_string(r) + ", " + std::to_string(c) + ")";
            }
        }
    }
    if (!problems.empty()) throw CoverageError("assemble_patches: bad coverage:" + problems);

    const int h = grid.source_height > 0 ? grid.source_height : grid.padded_height();
    const int w = grid.source_width > 0 ? grid.source_width : grid.padded_width();
    std::vector<double> pixels(static_cast<std::size_t>(h) * w);
    const int ps = grid.patch_size;
    for (const auto& p : patches) {
        for (int r = 0; r < ps; ++r) {
            const int y = p.grid_row * ps + r;
            if (y >= h) break;
            for (int c = 0; c < ps; ++c) {
                const int x = p.grid_col * ps + c;
                if (x >= w) break;
                pixels[static_cast<std::size_t>(y) * w + x] =
                    p.pixels[static_cast<std::size_t>(r) * ps + c];
            }
        }
    }
    return GrayImage(h, w, std::move(pixels));
}

}  // namespace softglcm
