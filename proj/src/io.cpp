#include "io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

namespace ttc {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[8] = {'T', 'N', 'S', 'R', 'B', 'I', 'N', '1'};

// All multi-byte fields are little-endian; serialize explicitly so the
// format does not depend on host byte order.
void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& buf, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  put_u64(buf, bits);
}

class Reader {
public:
  Reader(const fs::path& path) : in_(path, std::ios::binary), path_(path) {
    require(in_.good(), Errc::io, "cannot open " + path.string());
  }

  void read(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    require(in_.gcount() == static_cast<std::streamsize>(n), Errc::parse,
            "truncated file " + path_.string());
  }

  std::uint32_t u32() {
    unsigned char b[4];
    read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
  }

  std::uint64_t u64() {
    unsigned char b[8];
    read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }

  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }

  bool at_eof() {
    in_.peek();
    return in_.eof();
  }

private:
  std::ifstream in_;
  fs::path path_;
};

// Write-then-rename so readers never observe a partial file.
void write_file_atomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), Errc::io, "cannot create " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    require(out.good(), Errc::io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  require(!ec, Errc::io, "cannot move " + tmp.string() + " to " + path.string());
}

fs::path core_file_path(const fs::path& manifest, Index k) {
  fs::path p = manifest;
  p += ".core" + std::to_string(k) + ".tnsr";
  return p;
}

int read_pnm_int(Reader& r) {
  // PNM token scanner: skips whitespace and # comments.
  char c;
  for (;;) {
    r.read(&c, 1);
    if (c == '#') {
      while (c != '\n') r.read(&c, 1);
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      break;
    }
  }
  require(std::isdigit(static_cast<unsigned char>(c)), Errc::parse,
          "malformed PNM header");
  int v = 0;
  while (std::isdigit(static_cast<unsigned char>(c))) {
    v = v * 10 + (c - '0');
    require(v <= 1 << 28, Errc::parse, "PNM header value out of range");
    r.read(&c, 1);
  }
  require(std::isspace(static_cast<unsigned char>(c)), Errc::parse,
          "malformed PNM header");
  return v;
}

}  // namespace

void save_tnsr(const DenseTensor& t, const fs::path& path) {
  std::string buf;
  buf.reserve(12 + 8 * t.dims().size() + 8 * static_cast<std::size_t>(t.size()));
  buf.append(kMagic, sizeof kMagic);
  put_u32(buf, static_cast<std::uint32_t>(t.order()));
  for (Index d : t.dims()) put_u64(buf, static_cast<std::uint64_t>(d));
  for (double v : t.values()) put_f64(buf, v);
  write_file_atomic(path, buf);
}

DenseTensor load_tnsr(const fs::path& path) {
  Reader r(path);
  char magic[8];
  r.read(magic, 8);
  require(std::memcmp(magic, kMagic, 8) == 0, Errc::parse,
          path.string() + " is not a TNSR v1 file");
  const std::uint32_t order = r.u32();
  require(order >= 1 && order <= 64, Errc::parse,
          "unreasonable tensor order in " + path.string());
  std::vector<Index> dims(order);
  std::uint64_t total = 1;
  for (auto& d : dims) {
    const std::uint64_t e = r.u64();
    require(e >= 1 && e <= (std::uint64_t{1} << 48), Errc::parse,
            "bad extent in " + path.string());
    total *= e;
    require(total <= (std::uint64_t{1} << 48), Errc::parse,
            "tensor too large in " + path.string());
    d = static_cast<Index>(e);
  }
  std::vector<double> values(total);
  for (auto& v : values) v = r.f64();
  require(r.at_eof(), Errc::parse, "trailing bytes in " + path.string());
  return DenseTensor(std::move(dims), std::move(values));
}

DenseTensor load_image(const fs::path& path) {
  Reader r(path);
  char magic[2];
  r.read(magic, 2);
  const bool color = magic[1] == '6';
  require(magic[0] == 'P' && (color || magic[1] == '5'), Errc::parse,
          path.string() + " is not a binary PPM/PGM file");
  const int width = read_pnm_int(r);
  const int height = read_pnm_int(r);
  const int maxval = read_pnm_int(r);
  require(width >= 1 && height >= 1, Errc::parse, "bad PNM size");
  require(maxval == 255, Errc::parse, "only 8-bit PNM (maxval 255) supported");

  const int channels = color ? 3 : 1;
  std::vector<unsigned char> bytes(static_cast<std::size_t>(width) * height *
                                   channels);
  r.read(reinterpret_cast<char*>(bytes.data()), bytes.size());

  std::vector<Index> dims = color ? std::vector<Index>{height, width, 3}
                                  : std::vector<Index>{height, width};
  DenseTensor t(std::move(dims));
  std::size_t p = 0;
  for (Index row = 0; row < height; ++row)
    for (Index col = 0; col < width; ++col)
      for (Index ch = 0; ch < channels; ++ch) {
        const Index off = row + col * height + ch * height * width;
        t[off] = static_cast<double>(bytes[p++]) / 255.0;
      }
  return t;
}

void save_image(const DenseTensor& t, const fs::path& path) {
  const bool color = t.order() == 3 && t.dims()[2] == 3;
  require(color || t.order() == 2, Errc::shape_mismatch,
          "image tensors must be H x W or H x W x 3");
  const Index height = t.dims()[0], width = t.dims()[1];
  const Index channels = color ? 3 : 1;

  std::string buf;
  buf += color ? "P6\n" : "P5\n";
  buf += std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  for (Index row = 0; row < height; ++row)
    for (Index col = 0; col < width; ++col)
      for (Index ch = 0; ch < channels; ++ch) {
        const Index off = row + col * height + ch * height * width;
        const double v = std::round(t[off] * 255.0);
        buf.push_back(static_cast<char>(
            static_cast<unsigned char>(std::clamp(v, 0.0, 255.0))));
      }
  write_file_atomic(path, buf);
}

void save_tt(const TtCores& g, const fs::path& manifest) {
  std::string names;
  for (Index n = 0; n < g.order(); ++n) {
    const fs::path core_path = core_file_path(manifest, n);
    std::vector<Index> core_dims{g.rank_before(n), g.dims()[n],
                                 g.rank_after(n)};
    save_tnsr(DenseTensor(std::move(core_dims),
                          std::vector<double>(g.core(n).begin(),
                                              g.core(n).end())),
              core_path);
    names += core_path.filename().string() + "\n";
  }
  write_file_atomic(manifest, names);
}

TtCores load_tt(const fs::path& manifest) {
  std::ifstream in(manifest);
  require(in.good(), Errc::io, "cannot open " + manifest.string());
  std::vector<fs::path> core_paths;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) core_paths.push_back(manifest.parent_path() / line);
  }
  require(!core_paths.empty(), Errc::parse,
          "empty TT manifest " + manifest.string());

  std::vector<DenseTensor> cores;
  cores.reserve(core_paths.size());
  std::vector<Index> dims, ranks;
  for (const auto& p : core_paths) {
    DenseTensor c = load_tnsr(p);
    require(c.order() == 3, Errc::parse,
            "TT core file must be order-3: " + p.string());
    if (!cores.empty())
      require(c.dims()[0] == cores.back().dims()[2], Errc::parse,
              "TT core rank chain mismatch at " + p.string());
    dims.push_back(c.dims()[1]);
    ranks.push_back(c.dims()[0]);
    cores.push_back(std::move(c));
  }
  ranks.push_back(cores.back().dims()[2]);

  try {
    TtCores g(std::move(dims), std::move(ranks));
    for (Index n = 0; n < g.order(); ++n) {
      auto src = cores[static_cast<std::size_t>(n)].values();
      std::copy(src.begin(), src.end(), g.core(n).begin());
    }
    return g;
  } catch (const Error& e) {
    fail(Errc::parse, "invalid TT container " + manifest.string() + ": " +
                          e.what());
  }
}

void write_csv_log(std::span<const SolveLogRow> log, const fs::path& path,
                   bool include_timing) {
  std::string buf = "iter,objective,rse_observed,elapsed_ms\n";
  char line[160];
  for (const auto& row : log) {
    std::snprintf(line, sizeof line, "%lld,%.17g,%.17g,%.3f\n",
                  static_cast<long long>(row.iter), row.objective,
                  row.rse_observed, include_timing ? row.elapsed_ms : 0.0);
    buf += line;
  }
  write_file_atomic(path, buf);
}

}  // namespace ttc
