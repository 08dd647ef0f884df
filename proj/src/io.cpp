#include "graphlim/io.hpp"

#include "graphlim/errors.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace graphlim::io {

namespace
{
    using nlohmann::json;

    std::string_view trim(std::string_view s)
    {
        while (! s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
            s.remove_prefix(1);
        while (! s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
            s.remove_suffix(1);
        return s;
    }

    std::vector<std::string_view> split_lines(std::string_view text)
    {
        std::vector<std::string_view> lines;
        while (! text.empty()) {
            auto nl = text.find('\n');
            lines.push_back(text.substr(0, nl));
            if (nl == std::string_view::npos)
                break;
            text.remove_prefix(nl + 1);
        }
        return lines;
    }

    // Whitespace-separated integers; fails on anything else.
    std::vector<long long> integers(std::string_view line, int lineno)
    {
        std::vector<long long> out;
        line = trim(line);
        while (! line.empty()) {
            long long v = 0;
            auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
            if (ec != std::errc() || (ptr != line.data() + line.size() && ! std::isspace(static_cast<unsigned char>(*ptr))))
                throw ParseError("line " + std::to_string(lineno) + ": expected integers");
            out.push_back(v);
            line = trim(line.substr(static_cast<std::size_t>(ptr - line.data())));
        }
        return out;
    }

    double parse_double(std::string_view s, const std::string & where)
    {
        s = trim(s);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
            throw ParseError(where + ": '" + std::string(s) + "' is not a number");
        return v;
    }

    json parse_json(std::string_view text)
    {
        try {
            return json::parse(text);
        }
        catch (const json::parse_error & e) {
            throw ParseError(std::string("malformed JSON: ") + e.what());
        }
    }

    Eigen::MatrixXd square_matrix(const json & j, const char * name)
    {
        if (! j.is_array())
            throw ParseError(std::string(name) + " must be an array of rows");
        const auto n = static_cast<Eigen::Index>(j.size());
        Eigen::MatrixXd m(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto & row = j[static_cast<std::size_t>(i)];
            if (! row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
                throw ParseError(std::string(name) + " row " + std::to_string(i + 1) + " must have " + std::to_string(n) + " entries");
            for (Eigen::Index k = 0; k < n; ++k) {
                const auto & x = row[static_cast<std::size_t>(k)];
                if (! x.is_number())
                    throw ParseError(std::string(name) + "[" + std::to_string(i + 1) + "][" + std::to_string(k + 1) + "] is not a number");
                m(i, k) = x.get<double>();
            }
        }
        return m;
    }

    std::vector<double> number_array(const json & j, const char * name)
    {
        if (! j.is_array())
            throw ParseError(std::string(name) + " must be an array");
        std::vector<double> out;
        for (const auto & x : j) {
            if (! x.is_number())
                throw ParseError(std::string(name) + " has a non-numeric entry");
            out.push_back(x.get<double>());
        }
        return out;
    }

    const json & field(const json & j, const char * name)
    {
        if (! j.is_object() || ! j.contains(name))
            throw ParseError(std::string("missing field \"") + name + "\"");
        return j.at(name);
    }

    std::string json_array(const std::vector<double> & v)
    {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i)
                s += ',';
            s += format_number(v[i]);
        }
        return s + "]";
    }

    std::string json_matrix(const Eigen::MatrixXd & m)
    {
        std::string s = "[";
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (i)
                s += ',';
            std::vector<double> row(m.cols());
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                row[j] = m(i, j);
            s += json_array(row);
        }
        return s + "]";
    }
}

std::string format_number(double value)
{
    if (value == 0.0)
        value = 0.0; // drop the sign of negative zero
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 15);
    if (ec != std::errc())
        throw InvariantError("number formatting failed");
    return std::string(buf, ptr);
}

SimpleGraph parse_edge_list(std::string_view text)
{
    auto lines = split_lines(text);
    std::vector<std::pair<int, std::string_view>> content;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto t = trim(lines[i]);
        if (! t.empty() && t.front() != '#')
            content.emplace_back(static_cast<int>(i + 1), t);
    }
    if (content.empty())
        throw ParseError("empty edge list");
    auto header = integers(content[0].second, content[0].first);
    if (header.size() != 2 || header[0] < 0 || header[1] < 0)
        throw ParseError("line " + std::to_string(content[0].first) + ": header must be \"n m\"");
    const long long n = header[0], m = header[1];
    if (static_cast<long long>(content.size()) - 1 != m)
        throw ParseError("header declares " + std::to_string(m) + " edges but " + std::to_string(content.size() - 1) + " edge lines follow");

    std::vector<Edge> edges;
    for (std::size_t i = 1; i < content.size(); ++i) {
        auto uv = integers(content[i].second, content[i].first);
        if (uv.size() != 2)
            throw ParseError("line " + std::to_string(content[i].first) + ": expected \"u v\"");
        if (uv[0] < 1 || uv[0] > n || uv[1] < 1 || uv[1] > n)
            throw ParseError("line " + std::to_string(content[i].first) + ": vertex out of range 1.." + std::to_string(n));
        edges.push_back({static_cast<int>(uv[0] - 1), static_cast<int>(uv[1] - 1)});
    }
    return SimpleGraph(static_cast<int>(n), edges);
}

std::string serialize_edge_list(const SimpleGraph & g)
{
    std::string s = std::to_string(g.order()) + " " + std::to_string(g.size()) + "\n";
    for (auto [u, v] : g.edges())
        s += std::to_string(u + 1) + " " + std::to_string(v + 1) + "\n";
    return s;
}

WeightedGraph parse_weighted_json(std::string_view text)
{
    json j = parse_json(text);
    auto alpha = number_array(field(j, "alpha"), "alpha");
    auto beta = square_matrix(field(j, "beta"), "beta");
    return WeightedGraph(std::move(alpha), std::move(beta));
}

std::string serialize_weighted_json(const WeightedGraph & g)
{
    return "{\"alpha\":" + json_array(g.alphas()) + ",\"beta\":" + json_matrix(g.betas()) + "}\n";
}

StepGraphon parse_stepfunction_json(std::string_view text)
{
    json j = parse_json(text);
    auto weights = number_array(field(j, "weights"), "weights");
    auto values = square_matrix(field(j, "values"), "values");
    return StepGraphon(std::move(weights), std::move(values));
}

std::string serialize_stepfunction_json(const StepGraphon & w)
{
    return "{\"weights\":" + json_array(w.weights()) + ",\"values\":" + json_matrix(w.values()) + "}\n";
}

Eigen::MatrixXd parse_csv_matrix(std::string_view text)
{
    std::vector<std::vector<double>> rows;
    auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto line = trim(lines[i]);
        if (line.empty())
            continue;
        std::vector<double> row;
        std::size_t col = 0;
        for (;;) {
            auto comma = line.find(',');
            row.push_back(parse_double(line.substr(0, comma),
                "line " + std::to_string(i + 1) + " column " + std::to_string(++col)));
            if (comma == std::string_view::npos)
                break;
            line.remove_prefix(comma + 1);
        }
        if (! rows.empty() && row.size() != rows.front().size())
            throw ParseError("line " + std::to_string(i + 1) + ": ragged CSV row");
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw ParseError("empty CSV matrix");
    Eigen::MatrixXd m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

std::string serialize_csv_matrix(const Eigen::MatrixXd & m)
{
    std::string s;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j)
                s += ',';
            s += format_number(m(i, j));
        }
        s += '\n';
    }
    return s;
}

std::string read_file(const std::filesystem::path & path)
{
    std::ifstream in(path, std::ios::binary);
    if (! in)
        throw ParseError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path & path, std::string_view contents)
{
    std::ofstream out(path, std::ios::binary);
    if (! out)
        throw ParseError("cannot write " + path.string());
    out << contents;
}

AnyGraph parse_graph_text(std::string_view text)
{
    if (auto t = trim(text); ! t.empty() && t.front() == '{')
        return parse_weighted_json(text);
    return parse_edge_list(text);
}

AnyGraph parse_graph_file(const std::filesystem::path & path)
{
    return parse_graph_text(read_file(path));
}

WeightedGraph as_weighted(const AnyGraph & g)
{
    if (auto s = std::get_if<SimpleGraph>(&g))
        return WeightedGraph::unweighted(*s);
    return std::get<WeightedGraph>(g);
}

Graphon load_graphon(const std::string & spec)
{
    if (spec.rfind("constant:", 0) == 0)
        return KernelGraphon::constant(parse_double(std::string_view(spec).substr(9), "constant graphon"));
    if (spec == "half-graph")
        return KernelGraphon::half_graph_limit();
    std::string text = read_file(spec);
    if (auto t = trim(text); ! t.empty() && t.front() == '{')
        return parse_stepfunction_json(text);
    return KernelGraphon::grid(parse_csv_matrix(text));
}

} // namespace graphlim::io
