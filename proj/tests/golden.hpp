#ifndef RLAM_TESTS_GOLDEN_HPP
#define RLAM_TESTS_GOLDEN_HPP

#include "rlam/cli.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlam::golden {

// One line of corpus/golden.txt: name, expected exit code, arguments. Arguments
// are split on blanks; single or double quotes group without escapes.
struct Case {
    std::string name;
    int exit_code = 0;
    std::vector<std::string> args;
};

inline std::vector<std::string> split_args(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    bool any = false;
    char quote = 0;
    for (char c : line) {
        if (quote) {
            if (c == quote)
                quote = 0;
            else
                cur += c;
        } else if (c == '\'' || c == '"') {
            quote = c;
            any = true;
        } else if (c == ' ' || c == '\t') {
            if (any || !cur.empty())
                out.push_back(cur);
            cur.clear();
            any = false;
        } else {
            cur += c;
        }
    }
    if (quote)
        throw std::runtime_error("unterminated quote in golden manifest: " + line);
    if (any || !cur.empty())
        out.push_back(cur);
    return out;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Paths in the manifest start with "corpus"; they are rebased onto dir.
inline std::vector<Case> load(const std::string& dir)
{
    std::istringstream in(read_file(dir + "/golden.txt"));
    std::vector<Case> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        auto words = split_args(line);
        if (words.size() < 2)
            throw std::runtime_error("bad golden line: " + line);
        Case c{words[0], std::stoi(words[1]), {}};
        for (std::size_t i = 2; i < words.size(); ++i) {
            std::string a = words[i];
            if (a == "corpus")
                a = dir;
            else if (a.rfind("corpus/", 0) == 0)
                a = dir + a.substr(6);
            c.args.push_back(a);
        }
        out.push_back(std::move(c));
    }
    return out;
}

struct Outcome {
    int exit_code;
    std::string out, err;
};

inline Outcome run(const Case& c)
{
    std::ostringstream out, err;
    int code = rlam::run(c.args, out, err);
    return {code, out.str(), err.str()};
}

inline std::string expected(const std::string& dir, const Case& c)
{
    return read_file(dir + "/golden/" + c.name + ".out");
}

} // namespace rlam::golden

#endif
