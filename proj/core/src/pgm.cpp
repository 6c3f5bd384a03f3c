#include "chaosbreak/pgm.hpp"

#include <cctype>
#include <fstream>
#include <string>

namespace chaosbreak {

namespace {

// Whitespace and '#' comments between header tokens, per the PNM grammar.
void skip_separators(std::istream& in) {
    for (;;) {
        const int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (c != EOF && std::isspace(c)) {
            in.get();
        } else {
            return;
        }
    }
}

unsigned long read_header_number(std::istream& in, const std::string& path) {
    skip_separators(in);
    unsigned long value = 0;
    bool any = false;
    while (std::isdigit(in.peek())) {
        value = value * 10 + static_cast<unsigned long>(in.get() - '0');
        any = true;
    }
    if (!any) throw FormatError(path + ": malformed PGM header");
    return value;
}

} // namespace

ByteImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '5')
        throw FormatError(path + ": not a binary PGM (P5) file");

    const unsigned long width = read_header_number(in, path);
    const unsigned long height = read_header_number(in, path);
    const unsigned long maxval = read_header_number(in, path);
    if (maxval != 255) throw FormatError(path + ": maxval must be 255");

    // Exactly one whitespace byte separates the header from the payload.
    const int sep = in.get();
    if (sep == EOF || !std::isspace(sep)) throw FormatError(path + ": malformed PGM header");

    std::vector<std::uint8_t> data(width * height);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (static_cast<unsigned long>(in.gcount()) != width * height)
        throw FormatError(path + ": truncated pixel payload");
    return ByteImage(width, height, std::move(data));
}

void save_pgm(const ByteImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path);
    out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data().data()),
              static_cast<std::streamsize>(img.size()));
    if (!out) throw FormatError("failed writing " + path);
}

} // namespace chaosbreak
