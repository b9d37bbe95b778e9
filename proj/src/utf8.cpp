#include "verdict/utf8.hpp"

namespace verdict::utf8 {

namespace {

constexpr std::uint32_t kReplacement = 0xFFFD;

// Returns sequence length at p, or 0 if invalid. Writes the codepoint.
int decode_one(const unsigned char* p, const unsigned char* end, std::uint32_t* out) {
    unsigned char b0 = p[0];
    if (b0 < 0x80) {
        *out = b0;
        return 1;
    }
    int len;
    std::uint32_t cp;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        return 0;
    }
    if (end - p < len) return 0;
    for (int i = 1; i < len; ++i) {
        if ((p[i] & 0xC0) != 0x80) return 0;
        cp = (cp << 6) | (p[i] & 0x3F);
    }
    // overlong / surrogate / out-of-range checks
    if (len == 2 && cp < 0x80) return 0;
    if (len == 3 && cp < 0x800) return 0;
    if (len == 4 && cp < 0x10000) return 0;
    if (cp >= 0xD800 && cp <= 0xDFFF) return 0;
    if (cp > 0x10FFFF) return 0;
    *out = cp;
    return len;
}

}  // namespace

bool validate(std::string_view bytes) {
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const unsigned char* end = p + bytes.size();
    while (p < end) {
        std::uint32_t cp;
        int len = decode_one(p, end, &cp);
        if (len == 0) return false;
        p += len;
    }
    return true;
}

std::vector<std::uint32_t> decode(std::string_view bytes) {
    std::vector<std::uint32_t> out;
    out.reserve(bytes.size());
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const unsigned char* end = p + bytes.size();
    while (p < end) {
        std::uint32_t cp;
        int len = decode_one(p, end, &cp);
        if (len == 0) {
            out.push_back(kReplacement);
            ++p;
        } else {
            out.push_back(cp);
            p += len;
        }
    }
    return out;
}

std::string encode(const std::vector<std::uint32_t>& codepoints) {
    std::string out;
    out.reserve(codepoints.size());
    for (std::uint32_t cp : codepoints) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

std::uint32_t to_lower(std::uint32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 32;
    // Latin-1 supplement uppercase block, skipping the multiplication sign.
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
    return cp;
}

std::vector<std::uint32_t> compose(const std::vector<std::uint32_t>& codepoints) {
    auto composed = [](std::uint32_t base, std::uint32_t mark) -> std::uint32_t {
        switch (mark) {
            case 0x0301:  // acute
                switch (base) {
                    case 'a': return 0xE1; case 'e': return 0xE9; case 'i': return 0xED;
                    case 'o': return 0xF3; case 'u': return 0xFA; case 'y': return 0xFD;
                    case 'A': return 0xC1; case 'E': return 0xC9; case 'I': return 0xCD;
                    case 'O': return 0xD3; case 'U': return 0xDA; case 'Y': return 0xDD;
                }
                break;
            case 0x0300:  // grave
                switch (base) {
                    case 'a': return 0xE0; case 'e': return 0xE8; case 'i': return 0xEC;
                    case 'o': return 0xF2; case 'u': return 0xF9;
                    case 'A': return 0xC0; case 'E': return 0xC8; case 'I': return 0xCC;
                    case 'O': return 0xD2; case 'U': return 0xD9;
                }
                break;
            case 0x0302:  // circumflex
                switch (base) {
                    case 'a': return 0xE2; case 'e': return 0xEA; case 'i': return 0xEE;
                    case 'o': return 0xF4; case 'u': return 0xFB;
                    case 'A': return 0xC2; case 'E': return 0xCA; case 'I': return 0xCE;
                    case 'O': return 0xD4; case 'U': return 0xDB;
                }
                break;
            case 0x0303:  // tilde
                switch (base) {
                    case 'a': return 0xE3; case 'n': return 0xF1; case 'o': return 0xF5;
                    case 'A': return 0xC3; case 'N': return 0xD1; case 'O': return 0xD5;
                }
                break;
            case 0x0308:  // diaeresis
                switch (base) {
                    case 'a': return 0xE4; case 'e': return 0xEB; case 'i': return 0xEF;
                    case 'o': return 0xF6; case 'u': return 0xFC; case 'y': return 0xFF;
                    case 'A': return 0xC4; case 'E': return 0xCB; case 'I': return 0xCF;
                    case 'O': return 0xD6; case 'U': return 0xDC;
                }
                break;
            case 0x0327:  // cedilla
                if (base == 'c') return 0xE7;
                if (base == 'C') return 0xC7;
                break;
        }
        return 0;
    };

    std::vector<std::uint32_t> out;
    out.reserve(codepoints.size());
    for (std::size_t i = 0; i < codepoints.size(); ++i) {
        if (i + 1 < codepoints.size()) {
            std::uint32_t c = composed(codepoints[i], codepoints[i + 1]);
            if (c != 0) {
                out.push_back(c);
                ++i;
                continue;
            }
        }
        out.push_back(codepoints[i]);
    }
    return out;
}

}  // namespace verdict::utf8
