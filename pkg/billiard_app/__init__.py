# Chat application
