//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file overspill/model_io.hpp
//! JSON serialization of models and configuration files.
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "model.hpp"
#include "piecewise.hpp"

namespace overspill
{
using json = nlohmann::json;

//---------------------------------------------------------------------------//
/*!
 * Configuration error with its location: line and column for syntax errors,
 * JSON pointer for missing or malformed keys.
 */
class ConfigError : public std::runtime_error
{
  public:
    ConfigError(std::string const& source,
                std::string pointer,
                std::string const& message,
                int line = 0,
                int column = 0)
        : std::runtime_error(format(source, pointer, message, line, column))
        , pointer_(std::move(pointer))
        , line_(line)
        , column_(column)
    {
    }

    std::string const& pointer() const { return pointer_; }
    int line() const { return line_; }
    int column() const { return column_; }

  private:
    std::string pointer_;
    int line_;
    int column_;

    static std::string format(std::string const& source,
                              std::string const& pointer,
                              std::string const& message,
                              int line,
                              int column)
    {
        std::ostringstream os;
        os << (source.empty() ? "<config>" : source);
        if (line > 0)
        {
            os << ':' << line << ':' << column;
        }
        if (!pointer.empty())
        {
            os << " at " << pointer;
        }
        os << ": " << message;
        return os.str();
    }
};

//---------------------------------------------------------------------------//
//! Parse JSON text, converting syntax errors to line/column diagnostics.
inline json parse_json_text(std::string const& text, std::string const& source = {})
{
    try
    {
        return json::parse(text);
    }
    catch (json::parse_error const& e)
    {
        int line = 1;
        int column = 1;
        std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i)
        {
            if (text[i] == '\n')
            {
                ++line;
                column = 1;
            }
            else
            {
                ++column;
            }
        }
        std::string what = e.what();
        auto colon = what.rfind(": ");
        throw ConfigError(source,
                          "",
                          colon == std::string::npos ? what : what.substr(colon + 2),
                          line,
                          column);
    }
}

inline std::string read_text_file(std::string const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw ConfigError(path, "", "cannot open file");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

//---------------------------------------------------------------------------//
namespace detail
{
struct JsonReader
{
    std::string source;

    [[noreturn]] void fail(std::string const& ptr, std::string const& msg) const
    {
        throw ConfigError(source, ptr, msg);
    }

    json const& at(json const& j, std::string const& key, std::string const& ptr) const
    {
        if (!j.is_object())
        {
            fail(ptr, "expected an object");
        }
        auto it = j.find(key);
        if (it == j.end())
        {
            fail(ptr + "/" + key, "missing required key");
        }
        return *it;
    }

    double number(json const& j, std::string const& ptr) const
    {
        if (!j.is_number())
        {
            fail(ptr, "expected a number");
        }
        return j.get<double>();
    }

    std::vector<double> numbers(json const& j, std::string const& ptr) const
    {
        if (!j.is_array())
        {
            fail(ptr, "expected an array of numbers");
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < j.size(); ++i)
        {
            out.push_back(number(j[i], ptr + "/" + std::to_string(i)));
        }
        return out;
    }

    //! A constant (scalar shorthand) or {breaks, values}.
    PiecewiseConstant pc(json const& j, std::string const& ptr) const
    {
        if (j.is_number())
        {
            return PiecewiseConstant(j.get<double>());
        }
        if (!j.is_object())
        {
            fail(ptr, "expected a number or {breaks, values}");
        }
        return PiecewiseConstant(numbers(at(j, "breaks", ptr), ptr + "/breaks"),
                                 numbers(at(j, "values", ptr), ptr + "/values"));
    }

    std::vector<std::vector<PiecewiseConstant>>
    matrix(json const& root, char const* key, std::size_t n) const
    {
        std::string ptr = std::string("/") + key;
        std::vector<std::vector<PiecewiseConstant>> out(
            n, std::vector<PiecewiseConstant>(n, PiecewiseConstant(0.0)));
        auto it = root.find(key);
        if (it == root.end())
        {
            return out;
        }
        if (!it->is_array() || it->size() != n)
        {
            fail(ptr, "expected an n x n array");
        }
        for (std::size_t i = 0; i < n; ++i)
        {
            auto const& row = (*it)[i];
            std::string rp = ptr + "/" + std::to_string(i);
            if (!row.is_array() || row.size() != n)
            {
                fail(rp, "expected a row of n entries");
            }
            for (std::size_t j = 0; j < n; ++j)
            {
                out[i][j] = pc(row[j], rp + "/" + std::to_string(j));
            }
        }
        return out;
    }
};

inline json pc_to_json(PiecewiseConstant const& f)
{
    if (f.is_constant())
    {
        return f.values().front();
    }
    return json{{"breaks", f.breaks()}, {"values", f.values()}};
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Read a model description:
 * { n, horizon, epsilon_g?, debtors: [{alpha, gamma, p0}], phiA?, phiB? }.
 * Rates are numbers or {breaks, values}; missing impact matrices are zero.
 */
inline ModelSpec model_from_json(json const& j, std::string const& source = {})
{
    detail::JsonReader r{source};
    ModelSpec spec;
    json const& n_json = r.at(j, "n", "");
    if (!n_json.is_number_integer() || n_json.get<long>() < 1)
    {
        r.fail("/n", "expected a positive integer");
    }
    spec.n = n_json.get<std::size_t>();
    if (spec.n > kMaxDebtors)
    {
        r.fail("/n", "at most " + std::to_string(kMaxDebtors) + " debtors");
    }
    spec.horizon = r.number(r.at(j, "horizon", ""), "/horizon");
    if (j.contains("epsilon_g"))
    {
        spec.epsilon_g = r.number(j["epsilon_g"], "/epsilon_g");
    }
    json const& debtors = r.at(j, "debtors", "");
    if (!debtors.is_array() || debtors.size() != spec.n)
    {
        r.fail("/debtors", "expected an array of n debtor objects");
    }
    for (std::size_t k = 0; k < spec.n; ++k)
    {
        std::string ptr = "/debtors/" + std::to_string(k);
        auto const& d = debtors[k];
        spec.alpha.push_back(r.pc(r.at(d, "alpha", ptr), ptr + "/alpha"));
        spec.gamma.push_back(r.pc(r.at(d, "gamma", ptr), ptr + "/gamma"));
        spec.p0.push_back(d.contains("p0") ? r.number(d["p0"], ptr + "/p0") : 0.0);
    }
    spec.phiA = r.matrix(j, "phiA", spec.n);
    spec.phiB = r.matrix(j, "phiB", spec.n);
    return spec;
}

inline json model_to_json(ModelSpec const& spec)
{
    json j;
    j["n"] = spec.n;
    j["horizon"] = spec.horizon;
    j["epsilon_g"] = spec.epsilon_g;
    json debtors = json::array();
    for (std::size_t k = 0; k < spec.n; ++k)
    {
        debtors.push_back({{"alpha", detail::pc_to_json(spec.alpha[k])},
                           {"gamma", detail::pc_to_json(spec.gamma[k])},
                           {"p0", spec.p0[k]}});
    }
    j["debtors"] = debtors;
    for (auto [key, mat] : {std::pair{"phiA", &spec.phiA}, std::pair{"phiB", &spec.phiB}})
    {
        json rows = json::array();
        for (auto const& row : *mat)
        {
            json r = json::array();
            for (auto const& f : row)
            {
                r.push_back(detail::pc_to_json(f));
            }
            rows.push_back(r);
        }
        j[key] = rows;
    }
    return j;
}

inline ModelSpec load_model(std::string const& path)
{
    return model_from_json(parse_json_text(read_text_file(path), path), path);
}

//---------------------------------------------------------------------------//
}  // namespace overspill
