# Demo scripts for the docsieve curation pipeline
