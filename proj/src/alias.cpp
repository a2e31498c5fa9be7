#include <fstream>

#include "imtriage/extract.hpp"
#include "imtriage/util.hpp"

namespace imtriage::extract {

namespace {

std::string table_key(AppId app, const std::string& role, const std::string& canonical) {
    return std::string(model::to_string(app)) + "|" + role + "|" + canonical;
}

std::string column_key(AppId app, const std::string& role, const std::string& table,
                       const std::string& canonical) {
    return std::string(model::to_string(app)) + "|" + role + "|" + table + "|" + canonical;
}

std::string trim(std::string_view s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

bool has_column(const store::TableStore& st, const std::string& table, const std::string& col) {
    for (const auto& c : st.columns(table)) {
        if (util::iequals(c, col)) return true;
    }
    return false;
}

std::string find_table_ci(const store::TableStore& st, const std::string& name) {
    for (const auto& t : st.tables()) {
        if (util::iequals(t, name)) return t;
    }
    return {};
}

}  // namespace

void AliasTable::add_table_alias(AppId app, const std::string& role,
                                 const std::string& canonical, const std::string& alias) {
    table_aliases_[table_key(app, role, canonical)].push_back(alias);
}

void AliasTable::add_column_alias(AppId app, const std::string& role, const std::string& table,
                                  const std::string& canonical, const std::string& alias) {
    column_aliases_[column_key(app, role, table, canonical)].push_back(alias);
}

std::string AliasTable::resolve_table(AppId app, const std::string& role,
                                      const std::string& canonical,
                                      const store::TableStore& st) const {
    if (std::string t = find_table_ci(st, canonical); !t.empty()) return t;
    auto it = table_aliases_.find(table_key(app, role, canonical));
    if (it != table_aliases_.end()) {
        for (const auto& alias : it->second) {
            if (std::string t = find_table_ci(st, alias); !t.empty()) return t;
        }
    }
    return {};
}

std::string AliasTable::resolve_column(AppId app, const std::string& role,
                                       const std::string& canonical_table,
                                       const std::string& canonical_column,
                                       const store::TableStore& st,
                                       const std::string& actual_table) const {
    if (has_column(st, actual_table, canonical_column)) return canonical_column;
    auto it = column_aliases_.find(column_key(app, role, canonical_table, canonical_column));
    if (it != column_aliases_.end()) {
        for (const auto& alias : it->second) {
            if (has_column(st, actual_table, alias)) return alias;
        }
    }
    return {};
}

AliasTable AliasTable::defaults() {
    AliasTable t;
    // Known real-device variants. The canonical fixture schemas need no
    // aliases; these absorb drift observed in the wild.
    t.add_table_alias(AppId::viber, "data_db", "contacts", "phonebookcontact");
    t.add_column_alias(AppId::viber, "data_db", "contacts", "name", "display_name");
    t.add_column_alias(AppId::viber, "data_db", "contacts", "number", "phone_number");
    t.add_table_alias(AppId::viber, "messages_db", "messages", "viber_messages");
    t.add_column_alias(AppId::whatsapp, "chat_db", "messages", "data", "body");
    t.add_column_alias(AppId::whatsapp, "chat_db", "messages", "media_file",
                       "media_name");
    t.add_table_alias(AppId::whatsapp, "contacts_db", "wa_contacts", "contacts");
    t.add_table_alias(AppId::skype, "main_db", "Calls", "CallHistory");
    return t;
}

AliasTable AliasTable::load(const std::filesystem::path& file) {
    AliasTable t = defaults();
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot read alias file: " + file.string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        auto fail = [&](const std::string& why) {
            throw std::runtime_error(file.string() + ":" + std::to_string(lineno) + ": " + why);
        };
        size_t eq = s.find('=');
        if (eq == std::string::npos) fail("expected '='");
        std::string key = trim(s.substr(0, eq));
        std::string value = s.substr(eq + 1);

        std::vector<std::string> parts;
        size_t start = 0;
        while (start <= key.size()) {
            size_t dot = key.find('.', start);
            if (dot == std::string::npos) dot = key.size();
            parts.push_back(key.substr(start, dot - start));
            if (dot == key.size()) break;
            start = dot + 1;
        }

        auto app = parts.empty() ? std::nullopt : model::app_from_string(parts[0]);
        if (!app) fail("unknown app in key");

        std::vector<std::string> aliases;
        size_t pos = 0;
        while (pos <= value.size()) {
            size_t comma = value.find(',', pos);
            if (comma == std::string::npos) comma = value.size();
            std::string a = trim(value.substr(pos, comma - pos));
            if (!a.empty()) aliases.push_back(a);
            if (comma == value.size()) break;
            pos = comma + 1;
        }
        if (aliases.empty()) fail("no aliases on right-hand side");

        if (parts.size() == 4 && parts[2] == "table") {
            for (const auto& a : aliases) t.add_table_alias(*app, parts[1], parts[3], a);
        } else if (parts.size() == 5 && parts[2] == "column") {
            for (const auto& a : aliases)
                t.add_column_alias(*app, parts[1], parts[3], parts[4], a);
        } else {
            fail("key must be <app>.<role>.table.<name> or <app>.<role>.column.<table>.<name>");
        }
    }
    return t;
}

}  // namespace imtriage::extract
