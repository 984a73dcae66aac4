#include "honeysheets/honeygen.hpp"

#include <array>

namespace honeysheets::honeygen {

namespace {

constexpr std::array<std::string_view, 112> kGiven = {
    "Aaron",   "Abigail", "Adam",     "Adrian",   "Aisha",   "Alan",     "Alexander", "Alice",   "Amelia",
    "Amir",    "Andrew",  "Anna",     "Anthony",  "Arjun",   "Barbara",  "Ben",       "Bethany", "Bradley",
    "Callum",  "Camila",  "Carl",     "Caroline", "Charles", "Charlotte", "Chloe",    "Chris",   "Claire",
    "Colin",   "Connor",  "Daniel",   "David",    "Deborah", "Diana",    "Dominic",   "Edward",  "Eleanor",
    "Elena",   "Elliot",  "Emily",    "Emma",     "Ethan",   "Fatima",   "Felix",     "Fiona",   "Frances",
    "Gareth",  "Gemma",   "George",   "Grace",    "Hannah",  "Harriet",  "Harry",     "Helen",   "Henry",
    "Holly",   "Ian",     "Imogen",   "Isaac",    "Isabel",  "Jack",     "Jacob",     "James",   "Jasmine",
    "Jennifer", "Joanna", "John",     "Jonathan", "Joseph",  "Joshua",   "Julia",     "Karen",   "Katherine",
    "Kieran",  "Laura",   "Leah",     "Leo",      "Liam",    "Lily",     "Lucy",      "Luke",    "Maria",
    "Mark",    "Martin",  "Matthew",  "Megan",    "Michael", "Mohammed", "Natalie",   "Nathan",  "Neil",
    "Nicola",  "Noah",    "Oliver",   "Olivia",   "Oscar",   "Patrick",  "Paul",      "Priya",   "Rachel",
    "Rebecca", "Richard", "Robert",   "Ruth",     "Ryan",    "Samuel",   "Sarah",     "Sophie",  "Stephen",
    "Thomas",  "Victoria", "William", "Zara",
};

constexpr std::array<std::string_view, 110> kFamily = {
    "Adams",    "Ahmed",    "Allen",    "Anderson", "Bailey",   "Baker",     "Barker",   "Barnes",    "Bell",
    "Bennett",  "Brooks",   "Brown",    "Butler",   "Campbell", "Carter",    "Chapman",  "Clark",     "Clarke",
    "Cole",     "Collins",  "Cook",     "Cooper",   "Cox",      "Davies",    "Davis",    "Dixon",     "Edwards",
    "Ellis",    "Evans",    "Fisher",   "Fletcher", "Foster",   "Fox",       "Gibson",   "Graham",    "Grant",
    "Gray",     "Green",    "Griffiths", "Hall",    "Harris",   "Harrison",  "Hart",     "Hill",      "Holmes",
    "Hughes",   "Hunt",     "Hussain",  "Jackson",  "James",    "Jenkins",   "Johnson",  "Jones",     "Kaur",
    "Kelly",    "Khan",     "King",     "Knight",   "Lee",      "Lewis",     "Lloyd",    "Marshall",  "Martin",
    "Mason",    "Matthews", "Miller",   "Mills",    "Mitchell", "Moore",     "Morgan",   "Morris",    "Murphy",
    "Murray",   "Owen",     "Palmer",   "Parker",   "Patel",    "Pearson",   "Phillips", "Powell",    "Price",
    "Reid",     "Richards", "Roberts",  "Robinson", "Rogers",   "Rose",      "Russell",  "Saunders",  "Scott",
    "Shaw",     "Simpson",  "Singh",    "Smith",    "Stevens",  "Stewart",   "Taylor",   "Thomas",    "Thompson",
    "Turner",   "Walker",   "Ward",     "Watson",   "Webb",     "White",     "Wilkinson", "Williams", "Wilson",
    "Wood",     "Wright",
};

constexpr std::array<std::string_view, 24> kRoles = {
    "Accountant",         "Account Manager",    "Analyst",          "Business Analyst",   "Compliance Officer",
    "Data Engineer",      "Finance Director",   "Financial Controller", "HR Advisor",     "IT Support",
    "Legal Counsel",      "Marketing Manager",  "Office Manager",   "Operations Manager", "Payroll Officer",
    "Product Manager",    "Project Manager",    "Receptionist",     "Sales Executive",    "Software Engineer",
    "Team Lead",          "Treasury Analyst",   "UX Designer",      "Warehouse Supervisor",
};

} // namespace

std::span<const std::string_view> given_names() { return kGiven; }
std::span<const std::string_view> family_names() { return kFamily; }
std::span<const std::string_view> job_roles() { return kRoles; }

} // namespace honeysheets::honeygen
