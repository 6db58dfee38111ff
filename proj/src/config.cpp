#include "normlab/config.hpp"

#include "normlab/blockstats.hpp"
#include "normlab/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace normlab {

namespace pt = boost::property_tree;

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ' && c != '\t') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    std::erase_if(out, [](const std::string& s) { return s.empty(); });
    return out;
}

std::uint64_t parse_count(const std::string& key, const std::string& v) {
    // Accepts 10000 as well as 1e4.
    std::size_t used = 0;
    double d = 0;
    try {
        d = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ConfigError(key + ": '" + v + "' is not a number");
    }
    if (used != v.size() || d < 0 || d != std::floor(d) || d > 1e18) {
        throw ConfigError(key + ": '" + v + "' is not a non-negative integer");
    }
    return static_cast<std::uint64_t>(d);
}

double parse_real(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    try {
        const double d = std::stod(v, &used);
        if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError(key + ": '" + v + "' is not a number");
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": '" + v + "' is not a boolean");
}

template <typename T>
std::string join(const std::vector<T>& xs) {
    std::ostringstream os;
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
    return os.str();
}

std::string real_text(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    pt::ptree tree;
    std::istringstream is{std::string(text)};
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(e.what());
    }

    ExperimentConfig c;
    static const std::set<std::string> kSections{"generate", "discrepancy", "sumdigits", "expsum", "verify"};
    for (const auto& [key, node] : tree) {
        const std::string v = node.data();
        if (node.empty() && v.empty()) continue;
        if (!node.empty()) {
            if (!kSections.contains(key)) throw ConfigError("unknown section [" + key + "]");
            for (const auto& [k, n] : node) {
                const std::string val = n.data();
                const std::string full = key + "." + k;
                if (val.empty()) continue;  // unset
                if (key == "generate") {
                    if (k == "digits") c.digits = parse_count(full, val);
                    else if (k == "format") c.format = val;
                    else if (k == "table_P") c.table_limit = parse_count(full, val);
                    else throw ConfigError("unknown key " + full);
                } else if (key == "discrepancy") {
                    if (k == "ell") c.ell = parse_count(full, val);
                    else if (k == "n_grid") for (auto& s : split(val, ',')) c.n_grid.push_back(parse_count(full, s));
                    else if (k == "max_block_space") c.max_block_space = parse_count(full, val);
                    else throw ConfigError("unknown key " + full);
                } else if (key == "sumdigits") {
                    if (k == "p_grid") for (auto& s : split(val, ',')) c.p_grid.push_back(parse_count(full, s));
                    else if (k == "central_blocks") c.central_blocks = split(val, ',');
                    else throw ConfigError("unknown key " + full);
                } else if (key == "expsum") {
                    if (k == "p_grid") for (auto& s : split(val, ',')) c.expsum_p_grid.push_back(parse_count(full, s));
                    else if (k == "j") for (auto& s : split(val, ',')) c.j_values.push_back(static_cast<int>(parse_count(full, s)));
                    else if (k == "nu") for (auto& s : split(val, ',')) c.nu_values.push_back(static_cast<long>(parse_count(full, s)));
                    else if (k == "gamma") c.gamma = parse_real(full, val);
                    else if (k == "rho") c.rho = parse_real(full, val);
                    else if (k == "sweep") c.sweep = parse_bool(full, val);
                    else if (k == "block") c.sweep_block = val;
                    else if (k == "nu_max") c.nu_max = static_cast<long>(parse_count(full, val));
                    else if (k == "delta") c.delta = parse_real(full, val);
                    else if (k == "dump_coefficients") c.dump_coefficients = parse_bool(full, val);
                    else throw ConfigError("unknown key " + full);
                } else if (key == "verify") {
                    if (k == "scale") c.scale = val;
                    else if (k == "inject_fault") c.inject_fault = val;
                    else throw ConfigError("unknown key " + full);
                }
            }
            continue;
        }
        if (key == "function") c.function = v;
        else if (key == "base") c.base = static_cast<unsigned>(parse_count(key, v));
        else if (key == "mode") {
            if (v == "primes") c.mode = SourceMode::Primes;
            else if (v == "integers") c.mode = SourceMode::Integers;
            else throw ConfigError("mode must be primes or integers");
        } else if (key == "workers") c.workers = static_cast<unsigned>(parse_count(key, v));
        else if (key == "seed") c.seed = parse_count(key, v);
        else if (key == "start_bits") c.policy.start_bits = static_cast<int>(parse_count(key, v));
        else if (key == "max_bits") c.policy.max_bits = static_cast<int>(parse_count(key, v));
        else if (kSections.contains(key)) continue;  // empty section
        else throw ConfigError("unknown key " + key);
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void ExperimentConfig::apply_environment() {
    try {
        policy = PrecisionPolicy::from_environment(policy);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    validate();
}

PseudoPolynomial ExperimentConfig::parsed_function() const { return parse_function(function); }

Block ExperimentConfig::parse_block(std::string_view text) const {
    std::vector<Digit> digits;
    if (text.find(':') != std::string_view::npos) {
        for (const auto& part : split(text, ':')) digits.push_back(static_cast<Digit>(parse_count("block", part)));
    } else {
        for (char ch : text) {
            if (ch >= '0' && ch <= '9') digits.push_back(static_cast<Digit>(ch - '0'));
            else if (ch >= 'a' && ch <= 'z') digits.push_back(static_cast<Digit>(ch - 'a' + 10));
            else throw ConfigError(std::string("bad block digit '") + ch + "'");
        }
    }
    try {
        return make_block(base, std::move(digits), 64);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

void ExperimentConfig::validate() const {
    try {
        policy.validate();
        parsed_function();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("function/precision: ") + e.what());
    }
    if (base < 2 || base > 256) throw ConfigError("base must be in [2, 256]");
    if (workers < 1) throw ConfigError("workers must be at least 1");
    if (format != "raw" && format != "text") throw ConfigError("format must be raw or text");
    if (format == "text" && base > 36) throw ConfigError("text format supports bases up to 36");
    if (ell < 1) throw ConfigError("ell must be at least 1");
    for (auto n : n_grid) {
        if (n < 1) throw ConfigError("n_grid entries must be positive");
    }
    for (auto p : p_grid) {
        if (p < 2) throw ConfigError("p_grid entries must be at least 2");
    }
    for (auto p : expsum_p_grid) {
        if (p < 2) throw ConfigError("expsum p_grid entries must be at least 2");
    }
    for (auto nu : nu_values) {
        if (nu < 1) throw ConfigError("nu values must be positive");
    }
    for (const auto& b : central_blocks) parse_block(b);
    if (sweep) {
        if (sweep_block.empty()) throw ConfigError("expsum.sweep needs expsum.block");
        parse_block(sweep_block);
    }
    if (!expsum_p_grid.empty() || sweep) {
        try {
            decompose(parsed_function());
        } catch (const Error& e) {
            throw ConfigError(std::string("expsum: ") + e.what());
        }
    }
    if (scale != "quick" && scale != "full") throw ConfigError("verify.scale must be quick or full");
    if (!inject_fault.empty() && inject_fault != "sandwich_delta") {
        throw ConfigError("verify.inject_fault must be sandwich_delta");
    }
}

std::string ExperimentConfig::serialize() const {
    std::ostringstream os;
    os << "base = " << base << '\n'
       << "function = " << function << '\n'
       << "max_bits = " << policy.max_bits << '\n'
       << "mode = " << (mode == SourceMode::Primes ? "primes" : "integers") << '\n'
       << "seed = " << seed << '\n'
       << "start_bits = " << policy.start_bits << '\n'
       << "\n[generate]\n"
       << "digits = " << digits << '\n'
       << "format = " << format << '\n'
       << "table_P = " << table_limit << '\n'
       << "\n[discrepancy]\n"
       << "ell = " << ell << '\n'
       << "max_block_space = " << max_block_space << '\n'
       << "n_grid = " << join(n_grid) << '\n'
       << "\n[sumdigits]\n"
       << "central_blocks = " << join(central_blocks) << '\n'
       << "p_grid = " << join(p_grid) << '\n'
       << "\n[expsum]\n"
       << "block = " << sweep_block << '\n'
       << "delta = " << (delta ? real_text(*delta) : "") << '\n'
       << "dump_coefficients = " << (dump_coefficients ? "true" : "false") << '\n'
       << "gamma = " << (gamma ? real_text(*gamma) : "") << '\n'
       << "j = " << join(j_values) << '\n'
       << "nu = " << join(nu_values) << '\n'
       << "nu_max = " << (nu_max ? std::to_string(*nu_max) : "") << '\n'
       << "p_grid = " << join(expsum_p_grid) << '\n'
       << "rho = " << (rho ? real_text(*rho) : "") << '\n'
       << "sweep = " << (sweep ? "true" : "false") << '\n'
       << "\n[verify]\n"
       << "inject_fault = " << inject_fault << '\n'
       << "scale = " << scale << '\n';
    return os.str();
}

std::string ExperimentConfig::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : serialize()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace normlab
