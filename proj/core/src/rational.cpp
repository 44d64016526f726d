#include "tarifflab/rational.hpp"

#include <cctype>

namespace tarifflab {

Rat parse_rat(const std::string& text) {
    if (text.empty()) throw parse_error("empty rational literal");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        std::string num = text.substr(0, slash);
        std::string den = text.substr(slash + 1);
        if (num.empty() || den.empty()) throw parse_error("malformed rational: " + text);
        try {
            Rat r{mpz_class(num), mpz_class(den)};
            if (r.get_den() == 0) throw parse_error("zero denominator: " + text);
            r.canonicalize();
            return r;
        } catch (const std::invalid_argument&) {
            throw parse_error("malformed rational: " + text);
        }
    }
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string head = text.substr(0, dot);
        std::string frac = text.substr(dot + 1);
        bool neg = !head.empty() && head[0] == '-';
        if (neg) head = head.substr(1);
        else if (!head.empty() && head[0] == '+') head = head.substr(1);
        if (head.empty()) head = "0";
        for (char c : head)
            if (!std::isdigit(static_cast<unsigned char>(c))) throw parse_error("malformed decimal: " + text);
        for (char c : frac)
            if (!std::isdigit(static_cast<unsigned char>(c))) throw parse_error("malformed decimal: " + text);
        mpz_class scale = 1;
        for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
        mpz_class whole(head.empty() ? "0" : head);
        mpz_class fpart(frac.empty() ? "0" : frac);
        Rat r(whole * scale + fpart, scale);
        r.canonicalize();
        if (neg) r = -r;
        return r;
    }
    try {
        Rat r{mpz_class(text)};
        return r;
    } catch (const std::invalid_argument&) {
        throw parse_error("malformed integer: " + text);
    }
}

std::string rat_str(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rat rat_sum(const std::vector<Rat>& xs) {
    Rat s = 0;
    for (const auto& x : xs) s += x;
    return s;
}

Rat rat_dot(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace tarifflab
